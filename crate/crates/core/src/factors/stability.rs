use super::gamma::composed;
use super::{twisted_gamma, Param, PrincipalSeries, Request, R0};
use crate::arith::{FactoredRF, Scalar};
use crate::error::{bail, Result};
use crate::field::{AddChar, MultChar, Tracker};
use crate::tate::tate_gamma;

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub gamma1: FactoredRF,
    pub gamma2: FactoredRF,
    /// `c = pi^c_valuation · c_unit`.
    pub c_valuation: i64,
    pub c_unit: Vec<u8>,
    /// `det(r_0 ∘ sigma_1)(c)^-1 · gamma(eta, psi)^dim`.
    pub closed_form: FactoredRF,
}

impl StabilityReport {
    pub fn equal(&self) -> bool {
        self.gamma1 == self.gamma2
    }

    pub fn closed_form_matches(&self) -> bool {
        self.closed_form == self.gamma1 && self.closed_form == self.gamma2
    }
}

/// Find `c` with `psi(c x) = eta(1 + x)` for `x` in `p^k / p^a`, where
/// `a = a(eta)` and `k = floor(a/2) + 1`.
///
/// `v(c) = n(psi) - a`; the unit part is searched modulo `p^(a-k)`, testing
/// on the additive generators `x^l t^j` of `p^k / p^a`.
pub fn find_c(eta: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<(i64, Vec<u8>)> {
    let a = eta.conductor();
    let k = a / 2 + 1;
    if a < 2 || k >= a {
        bail!(Search, "ls-factors", "eta of conductor {a} is not ramified enough to define c");
    }
    let field = eta.field();
    let fq = field.fq();
    let v = psi.conductor() - a as i64;
    let mut targets = Vec::new();
    for j in k..a {
        for l in 0..field.f() {
            let beta = fq.basis(l);
            let mut x = field.one(a);
            x[j] = beta;
            targets.push((j as i64, beta, eta.unit_turn(&x, tr)?));
        }
    }
    for w in field.units(a - k) {
        let mut ok = true;
        for (j, beta, want) in &targets {
            if psi.eval(v + j, &field.scale(*beta, &w), tr)? != *want {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok((v, w));
        }
    }
    bail!(Search, "ls-factors", "no c found for eta of conductor {a}")
}

fn central_equal(p1: &PrincipalSeries, p2: &PrincipalSeries) -> bool {
    p1.central() == p2.central()
}

/// Compare `gamma(s, P_1, r_0 ⊠ eta, psi)` with `gamma(s, P_2, ...)` and with
/// the closed form for highly ramified `eta`.
///
/// With `enforce_threshold` the call is refused unless
/// `a(eta) >= 2 max a(chi) + 2`.
pub fn stability_check(
    p1: &PrincipalSeries,
    p2: &PrincipalSeries,
    r0: R0,
    eta: &MultChar,
    psi: &AddChar,
    enforce_threshold: bool,
    tr: &Tracker,
) -> Result<StabilityReport> {
    if p1.n() != p2.n() {
        bail!(Usage, "ls-factors", "parameters of different degree {} and {}", p1.n(), p2.n());
    }
    if !central_equal(p1, p2) {
        bail!(Usage, "ls-factors", "central characters differ");
    }
    let m = p1.max_conductor().max(p2.max_conductor());
    if enforce_threshold && eta.conductor() < 2 * m + 2 {
        bail!(
            Usage,
            "ls-factors",
            "a(eta) = {} is below the threshold 2·{m} + 2 = {}",
            eta.conductor(),
            2 * m + 2
        );
    }
    let req = |p: &PrincipalSeries| Request::new(Param::Principal(p.clone()), r0, eta.clone(), psi.clone());
    let gamma1 = twisted_gamma(&req(p1)?, tr)?;
    let gamma2 = twisted_gamma(&req(p2)?, tr)?;
    let (v, w) = find_c(eta, psi, tr)?;
    let trivial = MultChar::trivial(eta.field());
    let mut det = Scalar::one(p1.q());
    for rho in composed(p1, r0, &trivial)? {
        det = det.mul(&rho.value(v, &w, tr)?);
    }
    let dim = r0.dim(p1.n()) as i64;
    let closed_form = FactoredRF::constant(det.inv()?).mul(&tate_gamma(eta, psi, tr)?.pow(dim));
    Ok(StabilityReport { gamma1, gamma2, c_valuation: v, c_unit: w, closed_form })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub conductor: usize,
    pub equal: bool,
    /// `None` when no `c` exists at this conductor.
    pub closed_form_matches: Option<bool>,
}

/// Run the stability comparison for one `eta` of each conductor in `1..=level`
/// and return the rows with the least conductor from which equality always holds.
pub fn stability_scan(
    p1: &PrincipalSeries,
    p2: &PrincipalSeries,
    r0: R0,
    etas: &[MultChar],
    psi: &AddChar,
    tr: &Tracker,
) -> Result<(Vec<ScanRow>, Option<usize>)> {
    let mut rows = Vec::new();
    for eta in etas {
        let req = |p: &PrincipalSeries| Request::new(Param::Principal(p.clone()), r0, eta.clone(), psi.clone());
        let equal = twisted_gamma(&req(p1)?, tr)? == twisted_gamma(&req(p2)?, tr)?;
        let closed = match stability_check(p1, p2, r0, eta, psi, false, tr) {
            Ok(rep) => Some(rep.closed_form_matches()),
            Err(e) if e.kind == crate::ErrorKind::Search || e.kind == crate::ErrorKind::Precision => None,
            Err(e) => return Err(e),
        };
        rows.push(ScanRow { conductor: eta.conductor(), equal, closed_form_matches: closed });
    }
    rows.sort_by_key(|r| r.conductor);
    let mut minimal = None;
    for r in rows.iter().rev() {
        if !r.equal {
            break;
        }
        minimal = Some(r.conductor);
    }
    Ok((rows, minimal))
}
