//! The acceptance suite: eleven exact checks over small grids, each with a
//! time limit. Used by the `acceptance` test target and `lsgamma selftest`.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{FactoredRF, QPower, Scalar};
use crate::error::Result;
use crate::factors::{
    local_factors, plancherel, plancherel_decomposition, psi_dependence, psi_ratio, rs_gamma, spherical_l,
    stability_check, tempered_l, twisted_gamma, LanglandsQuotient, Param, PrincipalSeries, Request, TwistedFactors,
    R0,
};
use crate::field::{associate, characters_up_to, turn, AddChar, MultChar, Tracker, TruncatedField, Turn};
use crate::galois::{artin_factors, deligne_transfer, llc_match, WeilParam};
use crate::par::{self, Mode};
use crate::root::{compositions, GSpinRootDatum, Parity};
use crate::tate::{gauss_sum, tate_gamma};

const SHOWN: usize = 4;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub cases: usize,
    pub failed: usize,
    /// The first few failures.
    pub examples: Vec<String>,
    pub note: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failed == 0 && self.elapsed <= self.limit
    }

    pub fn line(&self) -> String {
        format!("criterion {:>2} {}", self.id, self.summary())
    }

    /// The line without its criterion number.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} {}: {} cases, {} failed, {:.2}s (limit {}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.cases,
            self.failed,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        if !self.note.is_empty() {
            s.push_str("; ");
            s.push_str(&self.note);
        }
        s
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Pass/fail counts from one sweep. A check returns `Ok(None)` on success,
/// `Ok(Some(why))` on a mismatch; errors count as failures.
#[derive(Default)]
struct Tally {
    cases: usize,
    failed: usize,
    examples: Vec<String>,
}

impl Tally {
    fn add(&mut self, r: Result<Option<String>>) {
        self.cases += 1;
        let msg = match r {
            Ok(None) => return,
            Ok(Some(m)) => m,
            Err(e) => e.to_string(),
        };
        self.failed += 1;
        if self.examples.len() < SHOWN {
            self.examples.push(msg);
        }
    }

    fn sweep<T, F>(&mut self, mode: Mode, cases: &[T], check: F)
    where
        T: Sync,
        F: Fn(&T) -> Result<Option<String>> + Sync + Send,
    {
        for r in par::map(mode, cases, check) {
            self.add(r);
        }
    }

    fn finish(self, id: u8, title: &'static str, note: String, start: Instant, limit: u64) -> Outcome {
        Outcome {
            id,
            title,
            cases: self.cases,
            failed: self.failed,
            examples: self.examples,
            note,
            elapsed: start.elapsed(),
            limit: Duration::from_secs(limit),
        }
    }
}

fn expect(ok: bool, why: impl FnOnce() -> String) -> Result<Option<String>> {
    Ok((!ok).then(why))
}

fn field(q: u64, level: usize) -> TruncatedField {
    let (p, f) = crate::arith::prime_power(q).expect("prime power");
    TruncatedField::new(p, f, level).expect("small field")
}

/// Index multisets of size `n` drawn from `0..k`.
fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in from..k {
            cur.push(i);
            go(k, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 0, &mut Vec::new(), &mut out);
    out
}

fn pick(pool: &[MultChar], idx: &[usize]) -> Vec<MultChar> {
    idx.iter().map(|&i| pool[i].clone()).collect()
}

/// Unitary characters of conductor at most `a`, with `chi(pi)` ranging over `turns`.
fn unitary_pool(r: &TruncatedField, a: usize, turns: &[Turn]) -> Vec<MultChar> {
    turns.iter().flat_map(|&t| characters_up_to(r, a, t, QPower::zero())).collect()
}

fn additive(r: &TruncatedField) -> Vec<AddChar> {
    let mut out: Vec<AddChar> = [-1, 0, 1].iter().map(|&n| AddChar::with_conductor(r, n)).collect();
    let u = r.unit_at(r.level(), r.unit_count(r.level()) - 1);
    out.push(AddChar::new(r, 0, u).expect("unit scale"));
    out
}

/// One `(P, eta)` per principal-series request in the unitary grid shared by
/// criteria 3 and 11: `q` in {2, 3}, `n` in {1, 2, 3}, conductors at most 2.
fn unitary_requests() -> Vec<(PrincipalSeries, MultChar)> {
    let mut out = Vec::new();
    for q in [2, 3] {
        let r = field(q, 3);
        let base = characters_up_to(&r, 2, turn(0, 1), QPower::zero());
        let pool = unitary_pool(&r, 2, &[turn(0, 1), turn(1, 4)]);
        for n in 1..=3 {
            for idx in multisets(pool.len(), n) {
                for eta in &base {
                    out.push((PrincipalSeries::new(pick(&pool, &idx)).expect("same field"), eta.clone()));
                }
            }
        }
    }
    out
}

pub fn functional_equation(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for q in [2, 3, 5] {
        let r = field(q, 3);
        let psis = additive(&r);
        for t in [turn(0, 1), turn(1, 3)] {
            for e in [QPower::zero(), QPower::new(1, 2)] {
                for chi in characters_up_to(&r, 3, t, e).into_iter().filter(|c| c.unit_order() <= 12) {
                    for psi in &psis {
                        cases.push((chi.clone(), psi.clone()));
                    }
                }
            }
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(chi, psi)| {
        let tr = Tracker::new();
        let g = tate_gamma(chi, psi, &tr)?;
        let back = tate_gamma(&chi.inv(), &psi.conj(), &tr)?.reflect();
        let prod = g.mul(&back);
        expect(prod.is_one(), || format!("q = {} a = {}: product is {prod}", chi.q(), chi.conductor()))
    });
    t.finish(1, "local functional equation", String::new(), start, 10)
}

pub fn gauss_modulus(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for q in [2, 3, 5] {
        let r = field(q, 3);
        let psis = additive(&r);
        for chi in unitary_pool(&r, 3, &[turn(0, 1), turn(1, 3)]) {
            if chi.conductor() == 0 || chi.unit_order() > 12 {
                continue;
            }
            for psi in &psis {
                cases.push((chi.clone(), psi.clone()));
            }
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(chi, psi)| {
        let g = gauss_sum(chi, psi, &Tracker::new())?;
        let want = Scalar::qpow(chi.q(), QPower::int(chi.conductor() as i64));
        let got = g.abs_sq();
        expect(got == want, || format!("q = {} a = {}: |G|^2 = {got}", chi.q(), chi.conductor()))
    });
    t.finish(2, "Gauss-sum modulus", String::new(), start, 5)
}

/// Langlands quotients on the same small fields: two or three unitary blocks
/// with strictly decreasing half-integral twists.
fn quotient_requests() -> Vec<(Param, MultChar)> {
    let mut out = Vec::new();
    let half = |k| Ratio::new(k, 2);
    for q in [2, 3] {
        let r = field(q, 3);
        let base = characters_up_to(&r, 2, turn(0, 1), QPower::zero());
        let ps = |v: Vec<MultChar>| PrincipalSeries::new(v).expect("same field");
        for (i, a) in base.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                let eta = &base[(i + 2 * j) % base.len()];
                let two = vec![(ps(vec![a.clone()]), half(1)), (ps(vec![b.clone()]), half(0))];
                out.push((Param::Quotient(LanglandsQuotient::new(two).unwrap()), eta.clone()));
                let c = &base[(i + j + 1) % base.len()];
                let three = vec![
                    (ps(vec![a.clone(), b.clone()]), half(1)),
                    (ps(vec![c.clone()]), half(-1)),
                ];
                out.push((Param::Quotient(LanglandsQuotient::new(three).unwrap()), eta.clone()));
                let steps = vec![
                    (ps(vec![a.clone()]), half(2)),
                    (ps(vec![b.clone()]), half(1)),
                    (ps(vec![c.clone()]), half(0)),
                ];
                out.push((Param::Quotient(LanglandsQuotient::new(steps).unwrap()), eta.clone()));
            }
        }
    }
    out
}

pub fn llc_compatibility(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(Param, MultChar, R0)> = Vec::new();
    let grid = unitary_requests()
        .into_iter()
        .map(|(p, eta)| (Param::Principal(p), eta))
        .chain(quotient_requests());
    for (p, eta) in grid {
        for r0 in [R0::Sym2, R0::Wedge2] {
            cases.push((p.clone(), eta.clone(), r0));
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(p, eta, r0)| {
        let psi = AddChar::canonical(p.field());
        let req = Request::new(p.clone(), *r0, eta.clone(), psi)?;
        llc_match(&req, &Tracker::new())?.check()?;
        Ok(None)
    });
    t.finish(3, "LLC compatibility", String::new(), start, 60)
}

/// `prod_{i<=j} eps(chi_i chi_j eta)` (or `i < j`) for unramified data, written
/// out directly: each factor is `q^(-n/2) c^(-n) Z^(-n)` with `c` its value at `pi`.
fn spherical_eps(p: &PrincipalSeries, r0: R0, eta: &MultChar, n: i64) -> Result<FactoredRF> {
    let q = p.q();
    let c = p.chars();
    let mut acc = FactoredRF::one(q);
    for (i, j) in r0.pairs(p.n()) {
        let v = c[i].pi_value().mul(&c[j].pi_value()).mul(&eta.pi_value());
        let unit = v.pow(-n)?.mul_qpow(QPower::new(-n, 2));
        acc = acc.mul(&FactoredRF::monomial(unit, -n));
    }
    Ok(acc)
}

pub fn spherical_consistency(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for q in [2, 3] {
        let r = field(q, 2);
        let ur = |t: Turn, e: QPower| MultChar::unramified(&r, t, e);
        let pool = [
            ur(turn(0, 1), QPower::zero()),
            ur(turn(1, 3), QPower::zero()),
            ur(turn(1, 4), QPower::new(1, 2)),
            ur(turn(1, 2), QPower::new(-1, 2)),
        ];
        let etas = [ur(turn(0, 1), QPower::zero()), ur(turn(1, 2), QPower::zero()), ur(turn(1, 3), QPower::new(1, 2))];
        for n in 1..=4 {
            for idx in multisets(pool.len(), n) {
                for eta in &etas {
                    for r0 in [R0::Sym2, R0::Wedge2] {
                        for psi_n in [0, 1] {
                            cases.push((PrincipalSeries::new(pick(&pool, &idx)).unwrap(), eta.clone(), r0, psi_n));
                        }
                    }
                }
            }
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(p, eta, r0, psi_n)| {
        let psi = AddChar::with_conductor(p.field(), *psi_n);
        let req = Request::principal(p.chars().to_vec(), *r0, eta.clone(), psi)?;
        let gamma = twisted_gamma(&req, &Tracker::new())?;
        let l = spherical_l(p, *r0, eta)?;
        let l_dual = spherical_l(&p.dual(), *r0, &eta.inv())?;
        let want = spherical_eps(p, *r0, eta, *psi_n)?.mul(&l_dual.reflect()).div(&l);
        expect(gamma == want, || format!("n = {} {}: {gamma} vs {want}", p.n(), r0.name()))
    });
    t.finish(4, "spherical consistency", String::new(), start, 10)
}

/// `gamma` rebuilt from a regrouping of the characters into blocks.
fn regrouped_gamma(req: &Request, p: &PrincipalSeries, partition: &[usize], tr: &Tracker) -> Result<FactoredRF> {
    let blocks = p.split(partition)?;
    let mut acc = FactoredRF::one(req.q());
    for b in &blocks {
        acc = acc.mul(&twisted_gamma(&req.with_param(Param::Principal(b.clone())), tr)?);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            acc = acc.mul(&rs_gamma(&blocks[i], &blocks[j].times(&req.eta)?, &req.psi, tr)?);
        }
    }
    Ok(acc)
}

pub fn multiplicativity(mode: Mode) -> Outcome {
    let start = Instant::now();
    let partitions: [&[usize]; 4] = [&[1, 1, 1], &[2, 1], &[1, 2], &[3]];
    let mut cases = Vec::new();
    for q in [2, 3] {
        let r = field(q, 3);
        let mut pool = unitary_pool(&r, 2, &[turn(0, 1), turn(1, 4)]);
        pool.push(MultChar::unramified(&r, turn(1, 3), QPower::new(1, 2)));
        let etas = characters_up_to(&r, 2, turn(1, 5), QPower::zero());
        for idx in multisets(pool.len(), 3) {
            for (k, r0) in [R0::Sym2, R0::Wedge2].into_iter().enumerate() {
                let eta = etas[(idx.iter().sum::<usize>() + k) % etas.len()].clone();
                cases.push((PrincipalSeries::new(pick(&pool, &idx)).unwrap(), eta, r0));
            }
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(p, eta, r0)| {
        let tr = Tracker::new();
        let req = Request::principal(p.chars().to_vec(), *r0, eta.clone(), AddChar::canonical(p.field()))?;
        let direct = twisted_gamma(&req, &tr)?;
        for part in partitions {
            let g = regrouped_gamma(&req, p, part, &tr)?;
            if g != direct {
                return Ok(Some(format!("{} {part:?}: {g} vs {direct}", r0.name())));
            }
        }
        Ok(None)
    });
    t.finish(5, "multiplicativity", String::new(), start, 10)
}

pub fn stability(mode: Mode) -> Outcome {
    let start = Instant::now();
    let r = field(3, 4);
    let mut pool = Vec::new();
    for k in 0..4 {
        pool.extend(characters_up_to(&r, 1, turn(k, 4), QPower::zero()));
    }
    pool.push(MultChar::unramified(&r, turn(0, 1), QPower::new(1, 2)));
    pool.push(MultChar::unramified(&r, turn(0, 1), QPower::new(-1, 2)));
    let params: Vec<PrincipalSeries> =
        multisets(pool.len(), 2).into_iter().map(|i| PrincipalSeries::new(pick(&pool, &i)).unwrap()).collect();
    // Group by central character; each member is compared with the first.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in params.iter().enumerate() {
        match classes.iter_mut().find(|c| params[c[0]].central() == p.central()) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    let etas: Vec<MultChar> =
        characters_up_to(&r, 4, turn(0, 1), QPower::zero()).into_iter().filter(|c| c.conductor() == 4).collect();
    let psi = AddChar::canonical(&r);
    let mut cases = Vec::new();
    for class in &classes {
        for &i in class {
            for eta in &etas {
                for r0 in [R0::Sym2, R0::Wedge2] {
                    cases.push((class[0], i, eta.clone(), r0));
                }
            }
        }
    }
    let pairs = classes.iter().map(|c| c.len() * (c.len() - 1) / 2).sum::<usize>();
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(rep, i, eta, r0)| {
        let s = stability_check(&params[*rep], &params[*i], *r0, eta, &psi, true, &Tracker::new())?;
        expect(s.equal() && s.closed_form_matches(), || {
            format!("{} pair ({rep}, {i}): {} / {} / closed form {}", r0.name(), s.gamma1, s.gamma2, s.closed_form)
        })
    });
    let note = format!("{} parameters in {} central classes ({pairs} pairs), {} eta", params.len(), classes.len(), etas.len());
    t.finish(6, "stability", note, start, 60)
}

pub fn psi_dependence_check(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for q in [2, 3] {
        let r = field(q, 3);
        let a = if q == 2 { 3 } else { 2 };
        let pool = unitary_pool(&r, a, &[turn(0, 1), turn(1, 4)]);
        let etas = characters_up_to(&r, a, turn(1, 3), QPower::zero());
        let mut scalings: Vec<(i64, Vec<u8>)> = vec![(1, r.one(3)), (-1, r.one(3))];
        scalings.extend(r.units(3).map(|u| (0, u)));
        for n in 1..=2 {
            for idx in multisets(pool.len(), n) {
                for (k, r0) in [R0::Sym2, R0::Wedge2].into_iter().enumerate() {
                    let eta = etas[(idx.iter().sum::<usize>() + k) % etas.len()].clone();
                    for psi_n in [0, 1] {
                        let psi = AddChar::with_conductor(&r, psi_n);
                        let req = Request::principal(pick(&pool, &idx), r0, eta.clone(), psi).unwrap();
                        cases.push((req, scalings.clone()));
                    }
                }
            }
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(req, scalings)| {
        let tr = Tracker::new();
        for (v, u) in scalings {
            let got = psi_ratio(req, *v, u, &tr)?;
            let want = psi_dependence(req, *v, u, &tr)?;
            if got != want {
                return Ok(Some(format!("n = {} {} v = {v}: {got} vs {want}", req.n(), req.r0.name())));
            }
        }
        Ok(None)
    });
    t.finish(7, "psi-dependence", String::new(), start, 30)
}

fn galois_plancherel(req: &Request, tr: &Tracker) -> Result<FactoredRF> {
    let sigma = WeilParam::from_principal(&req.param.flatten());
    let rho = sigma.r0_compose(req.r0, &req.eta)?;
    let rho_dual = sigma.dual().r0_compose(req.r0, &req.eta.inv())?;
    Ok(artin_factors(&rho, &req.psi, tr)?.gamma.mul(&artin_factors(&rho_dual, &req.psi.conj(), tr)?.gamma.negate()))
}

pub fn plancherel_check(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for q in [2, 3] {
        let r = field(q, 3);
        let pool = unitary_pool(&r, 2, &[turn(0, 1), turn(1, 4)]);
        let etas = characters_up_to(&r, 2, turn(1, 3), QPower::zero());
        for n in 1..=3 {
            for idx in multisets(pool.len(), n) {
                for (k, r0) in [R0::Sym2, R0::Wedge2].into_iter().enumerate() {
                    let eta = etas[(idx.iter().sum::<usize>() + k) % etas.len()].clone();
                    cases.push(Request::principal(pick(&pool, &idx), r0, eta, AddChar::canonical(&r)).unwrap());
                }
            }
        }
    }
    // (decomposition, Galois side, q^-dim scaling, q^+dim scaling) per case.
    let checks = par::map(mode, &cases, |req| -> Result<[bool; 4]> {
        let tr = Tracker::new();
        let direct = plancherel(req, &tr)?;
        let mut decomposed = true;
        for part in compositions(req.n()) {
            decomposed &= plancherel_decomposition(req, &part, &tr)?.1 == direct;
        }
        let galois = galois_plancherel(req, &tr)? == direct;
        let one = req.psi.field().one(req.psi.field().level());
        let scaled = plancherel(&req.with_psi(req.psi.scaled(1, &one)?), &tr)?;
        let dim = req.r0.dim(req.n()) as i64;
        let times = |k: i64| direct.mul(&FactoredRF::constant(Scalar::qpow(req.q(), QPower::int(k))));
        Ok([decomposed, galois, scaled == times(-dim), scaled == times(dim)])
    });
    let mut t = Tally::default();
    let mut counts = [0usize; 4];
    let mut trivial_dim = 0;
    for (req, r) in cases.iter().zip(checks) {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                t.add(Err(e));
                continue;
            }
        };
        for (c, ok) in counts.iter_mut().zip(r) {
            *c += ok as usize;
        }
        if req.r0.dim(req.n()) == 0 {
            trivial_dim += 1;
        }
        t.add(expect(r[0] && r[1] && r[2], || {
            format!(
                "n = {} {}: decomposition {}, Galois {}, psi^pi ratio q^-dim {}, q^+dim {}",
                req.n(),
                req.r0.name(),
                r[0],
                r[1],
                r[2],
                r[3]
            )
        }));
    }
    let n = cases.len();
    let note = format!(
        "decomposition {}/{n}, Galois product {}/{n}, mu'(psi^pi) = q^-dim mu'(psi) {}/{n} \
         ({trivial_dim} with dim 0), observed q^+dim = |pi|^-dim {}/{n}",
        counts[0], counts[1], counts[2], counts[3]
    );
    t.finish(8, "Plancherel", note, start, 30)
}

/// Requests for the purity fuzzer: unitary data of conductor up to 3 on a level-6 field.
fn fuzz_requests(r: &TruncatedField) -> Vec<Request> {
    let pool = unitary_pool(r, 3, &[turn(0, 1), turn(1, 4)]);
    let mut out = Vec::new();
    for (i, n) in [(0, 1), (5, 1), (3, 2), (7, 2), (10, 2)] {
        let chars: Vec<MultChar> = (0..n).map(|k| pool[(i + 4 * k) % pool.len()].clone()).collect();
        for (j, r0) in [R0::Sym2, R0::Wedge2].into_iter().enumerate() {
            let eta = pool[(i + j + 2) % pool.len()].clone();
            for psi_n in [0, 1] {
                out.push(Request::principal(chars.clone(), r0, eta.clone(), AddChar::with_conductor(r, psi_n)).unwrap());
            }
        }
    }
    out
}

fn all_factors(req: &Request, tr: &Tracker) -> Result<(TwistedFactors, TwistedFactors)> {
    let sigma = WeilParam::from_principal(&req.param.flatten());
    let artin = artin_factors(&sigma.r0_compose(req.r0, &req.eta)?, &req.psi, tr)?;
    Ok((local_factors(req, tr)?, artin))
}

/// Random coefficients at positions `from..` of a unit, keeping it a unit.
fn mutate(rng: &mut ChaCha8Rng, r: &TruncatedField, u: &[u8], from: usize) -> Vec<u8> {
    let mut out = u.to_vec();
    let q = r.q() as u8;
    for (i, c) in out.iter_mut().enumerate().skip(from) {
        *c = if i == 0 { rng.gen_range(1..q) } else { rng.gen_range(0..q) };
    }
    out
}

const MUTATIONS: usize = 1000;

pub fn close_fields(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::default();
    // Transfer across level pairs (l, l'), association at level l.
    let mut cases = Vec::new();
    for (q, lv, lv2, amax) in [(2, 5, 7, 4), (3, 4, 6, 3), (3, 6, 9, 3)] {
        let a = field(q, lv);
        let b = field(q, lv2);
        let pool = unitary_pool(&a, amax, &[turn(0, 1), turn(1, 4)]);
        let psis: Vec<(AddChar, AddChar)> =
            [0, 1].iter().map(|&n| (AddChar::with_conductor(&a, n), AddChar::with_conductor(&b, n))).collect();
        let cert = match associate(&a, &b, lv, &pool, &psis) {
            Ok(c) => c,
            Err(e) => {
                t.add(Err(e));
                continue;
            }
        };
        for n in 1..=2 {
            for idx in multisets(pool.len(), n).into_iter().step_by(3) {
                for (k, r0) in [R0::Sym2, R0::Wedge2].into_iter().enumerate() {
                    let eta = pool[(idx.iter().sum::<usize>() + k) % pool.len()].clone();
                    let sigma = WeilParam::new(&a, pick(&pool, &idx)).unwrap();
                    cases.push((cert.clone(), sigma, r0, eta, psis[(idx[0] + k) % 2].clone()));
                }
            }
        }
        // One past the gate: conductor l must be refused.
        let deep = characters_up_to(&a, lv, turn(0, 1), QPower::zero()).into_iter().find(|c| c.conductor() == lv);
        t.add(match deep {
            Some(c) => expect(associate(&a, &b, lv, &[c], &[]).is_err(), || format!("conductor {lv} accepted at level {lv}")),
            None => Ok(Some(format!("no conductor-{lv} character found"))),
        });
    }
    t.sweep(mode, &cases, |(cert, sigma, r0, eta, (p1, p2))| {
        let rep = deligne_transfer(cert, sigma, *r0, eta, (p1, p2))?;
        expect(rep.equal() && rep.pure(), || {
            format!("{} at levels {:?}: source {} target {}", r0.name(), (cert.level, cert.target.level()), rep.source.gamma, rep.target.gamma)
        })
    });
    let transfers = cases.len();

    // Purity fuzzer: change data the computation never read and expect no change.
    let r = field(3, 6);
    let reqs = fuzz_requests(&r);
    let baselines = par::map(mode, &reqs, |req| {
        let tr = Tracker::new();
        let f = all_factors(req, &tr)?;
        Ok::<_, crate::Error>((f, tr.level_read()))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a6d_6d61);
    let mut jobs = Vec::with_capacity(MUTATIONS);
    for k in 0..MUTATIONS {
        let i = rng.gen_range(0..reqs.len());
        if k % 2 == 0 {
            if let Ok((_, read)) = &baselines[i] {
                let scale = mutate(&mut rng, &r, reqs[i].psi.scale(), *read);
                jobs.push((i, Some(scale), None));
            }
        } else {
            let v = rng.gen_range(-1..=1);
            let u = r.unit_at(r.level(), rng.gen_range(0..r.unit_count(r.level())));
            jobs.push((i, None, Some((v, u))));
        }
    }
    t.sweep(mode, &jobs, |(i, scale, scaling)| {
        let req = &reqs[*i];
        match (scale, scaling) {
            (Some(scale), _) => {
                let (base, _) = baselines[*i].as_ref().map_err(Clone::clone)?;
                let psi = AddChar::new(&r, req.psi.conductor(), scale.clone())?;
                let again = all_factors(&req.with_psi(psi), &Tracker::new())?;
                expect(&again == base, || format!("request {i}: output changed after mutating psi above the read level"))
            }
            (None, Some((v, u))) => {
                let tr = Tracker::new();
                let first = psi_ratio(req, *v, u, &tr)?;
                let read = tr.level_read();
                let u2 = mutate(&mut ChaCha8Rng::seed_from_u64(*i as u64 ^ read as u64), &r, u, read);
                let second = psi_ratio(req, *v, &u2, &Tracker::new())?;
                expect(first == second, || format!("request {i}: psi ratio changed after mutating the unit above level {read}"))
            }
            _ => unreachable!(),
        }
    });
    let note = format!("{transfers} transfers, {} mutations", jobs.len());
    t.finish(9, "close-fields transfer", note, start, 30)
}

/// Standard Cartan matrix, entry `(i, j) = <alpha_i, alpha_j^v>`, simple roots
/// numbered along the diagram with the distinguished end last.
fn expected_cartan(n: usize, parity: Parity) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    match parity {
        Parity::Odd => {
            for i in 0..n.saturating_sub(1) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            if n >= 2 {
                c[n - 2][n - 1] = -2;
            }
        }
        Parity::Even => {
            for i in 0..n.saturating_sub(2) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            if n >= 3 {
                c[n - 3][n - 1] = -1;
                c[n - 1][n - 3] = -1;
            }
        }
    }
    c
}

pub fn root_data(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for n in 1..=6 {
        for parity in [Parity::Odd, Parity::Even] {
            if parity == Parity::Even && n < 2 {
                continue;
            }
            cases.push((n, parity));
        }
    }
    let mut not_self_assoc = Vec::new();
    let results = par::map(mode, &cases, |&(n, parity)| -> Result<(Option<String>, bool)> {
        let d = GSpinRootDatum::new(n, parity)?;
        let name = parity.cartan_type(n);
        let dim = (n * (n + 1) / 2) - if parity == Parity::Even { n } else { 0 };
        let mut bad = Vec::new();
        if d.cartan() != expected_cartan(n, parity) {
            bad.push(format!("Cartan matrix {:?}", d.cartan()));
        }
        let w0 = d.siegel_w0();
        if w0.length() != dim {
            bad.push(format!("l(w0) = {} not {dim}", w0.length()));
        }
        if n <= 5 {
            for part in compositions(n) {
                let dec = d.langlands_decomposition(&part)?;
                if dec.product() != w0.matrix || dec.total_length() != dim {
                    bad.push(format!("decomposition {part:?}"));
                }
            }
        }
        let assoc = d.is_self_associate();
        if !assoc {
            bad.push("w0(theta) != theta".to_string());
        }
        Ok(((!bad.is_empty()).then(|| format!("{name}: {}", bad.join(", "))), assoc))
    });
    let mut t = Tally::default();
    for (&(n, parity), r) in cases.iter().zip(results) {
        if let Ok((_, false)) = &r {
            not_self_assoc.push(parity.cartan_type(n));
        }
        t.add(r.map(|(m, _)| m));
    }
    let note = if not_self_assoc.is_empty() {
        String::new()
    } else {
        format!(
            "Siegel theta not self-associate for {}: the opposition involution of D_n, n odd, swaps the two end roots",
            not_self_assoc.join(", ")
        )
    };
    t.finish(10, "root data", note, start, 10)
}

pub fn tempered_poles(mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for (p, eta) in unitary_requests() {
        for r0 in [R0::Sym2, R0::Wedge2] {
            cases.push((p.clone(), eta.clone(), r0));
        }
    }
    let mut t = Tally::default();
    t.sweep(mode, &cases, |(p, eta, r0)| {
        let l = tempered_l(p, *r0, eta, &AddChar::canonical(p.field()), &Tracker::new())?;
        let (_, poles) = l.zeros_poles();
        for z in poles {
            match z.modulus_sq_qexp() {
                Some(e) if e >= QPower::zero() => {}
                _ => return Ok(Some(format!("{} pole at Z = {z}", r0.name()))),
            }
        }
        Ok(None)
    });
    t.finish(11, "tempered L poles", String::new(), start, 10)
}

pub type Criterion = fn(Mode) -> Outcome;

pub const CRITERIA: [Criterion; 11] = [
    functional_equation,
    gauss_modulus,
    llc_compatibility,
    spherical_consistency,
    multiplicativity,
    stability,
    psi_dependence_check,
    plancherel_check,
    close_fields,
    root_data,
    tempered_poles,
];

pub fn run_all(mode: Mode) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| c(mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multisets_count() {
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(multisets(5, 3).len(), 35);
    }

    #[test]
    fn expected_cartan_small_cases() {
        assert_eq!(expected_cartan(2, Parity::Odd), vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(expected_cartan(2, Parity::Even), vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(expected_cartan(3, Parity::Even)[0], vec![2, -1, -1]);
    }

    #[test]
    fn root_data_outcome_reports_odd_d() {
        let o = root_data(Mode::Sequential);
        assert_eq!(o.failed, 2, "{o}");
        assert!(o.note.contains("D3") && o.note.contains("D5"), "{}", o.note);
    }
}
