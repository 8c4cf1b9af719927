use super::{LanglandsQuotient, Param, PrincipalSeries, Request, R0};
use crate::arith::FactoredRF;
use crate::error::{bail, Result};
use crate::field::{AddChar, MultChar, Tracker};
use crate::par::{self, Mode};
use crate::tate::tate_gamma;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedFactors {
    pub gamma: FactoredRF,
    pub l: FactoredRF,
    pub eps: FactoredRF,
}

fn gamma_product(q: u64, chars: Vec<MultChar>, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    let parts = par::map(Mode::default(), &chars, |c| tate_gamma(c, psi, tr));
    let mut acc = FactoredRF::one(q);
    for g in parts {
        acc = acc.mul(&g?);
    }
    Ok(acc)
}

/// The constituents `chi_i chi_j eta` of `r_0(sigma) ⊗ eta`.
pub(crate) fn composed(p: &PrincipalSeries, r0: R0, eta: &MultChar) -> Result<Vec<MultChar>> {
    let c = p.chars();
    r0.pairs(p.n()).into_iter().map(|(i, j)| c[i].mul(&c[j])?.mul(eta)).collect()
}

/// `prod_{i,j} gamma(chi_i chi'_j, psi)`.
pub fn rs_gamma(p: &PrincipalSeries, p2: &PrincipalSeries, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    if p.field() != p2.field() {
        bail!(Usage, "ls-factors", "Rankin-Selberg factors need both parameters on one field");
    }
    let mut chars = Vec::with_capacity(p.n() * p2.n());
    for a in p.chars() {
        for b in p2.chars() {
            chars.push(a.mul(b)?);
        }
    }
    gamma_product(p.q(), chars, psi, tr)
}

fn ps_gamma(p: &PrincipalSeries, r0: R0, eta: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    gamma_product(p.q(), composed(p, r0, eta)?, psi, tr)
}

/// `gamma(s, pi, r_0 ⊠ eta, psi)`.
///
/// For a quotient, block `i` contributes its own factor at `s + 2 s_i` and
/// each pair `j > i` contributes `gamma(s + s_i + s_j, P_i × P_j eta)`.
pub fn twisted_gamma(req: &Request, tr: &Tracker) -> Result<FactoredRF> {
    match &req.param {
        Param::Principal(p) => ps_gamma(p, req.r0, &req.eta, &req.psi, tr),
        Param::Quotient(lq) => {
            let b = lq.blocks();
            let mut acc = FactoredRF::one(req.q());
            for (p, s) in b {
                acc = acc.mul(&ps_gamma(p, req.r0, &req.eta, &req.psi, tr)?.shift(s * 2, &req.lattice)?);
            }
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    let rs = rs_gamma(&b[i].0, &b[j].0.times(&req.eta)?, &req.psi, tr)?;
                    acc = acc.mul(&rs.shift(b[i].1 + b[j].1, &req.lattice)?);
                }
            }
            Ok(acc)
        }
    }
}

/// `prod (1 - chi_i chi_j eta(pi) Z)^-1` over `i <= j` (sym2) or `i < j` (wedge2).
pub fn spherical_l(p: &PrincipalSeries, r0: R0, eta: &MultChar) -> Result<FactoredRF> {
    if !p.is_unramified() || !eta.is_unramified() {
        bail!(Usage, "ls-factors", "spherical L-function needs unramified data");
    }
    let c = p.chars();
    let mut acc = FactoredRF::one(p.q());
    for (i, j) in r0.pairs(p.n()) {
        let a = c[i].pi_value().mul(&c[j].pi_value()).mul(&eta.pi_value());
        acc = acc.mul(&FactoredRF::geometric(a));
    }
    Ok(acc)
}

/// `1/P(Z)` where `P` has constant term 1 and the zeros of `gamma`.
fn l_from_zeros(gamma: &FactoredRF) -> FactoredRF {
    let mut acc = FactoredRF::one(gamma.q());
    for (c, &e) in gamma.factors() {
        if e > 0 {
            acc = acc.mul(&FactoredRF::linear(c.clone(), -e));
        }
    }
    acc
}

/// L-function of unitary principal-series data, read off the zeros of `gamma`.
pub fn tempered_l(p: &PrincipalSeries, r0: R0, eta: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    if !p.is_unitary() {
        bail!(Usage, "ls-factors", "tempered L-function needs unitary data");
    }
    Ok(l_from_zeros(&ps_gamma(p, r0, eta, psi, tr)?))
}

fn eps_from(gamma: &FactoredRF, l: &FactoredRF, l_dual: &FactoredRF) -> Result<FactoredRF> {
    let eps = gamma.mul(l).div(&l_dual.reflect());
    if !eps.is_monomial() {
        bail!(Consistency, "ls-factors", "epsilon factor {eps} is not a monomial");
    }
    Ok(eps)
}

/// Tempered Rankin-Selberg factors of `P × P'`.
pub fn rs_local_factors(
    p: &PrincipalSeries,
    p2: &PrincipalSeries,
    psi: &AddChar,
    tr: &Tracker,
) -> Result<TwistedFactors> {
    let gamma = rs_gamma(p, p2, psi, tr)?;
    let l = l_from_zeros(&gamma);
    let l_dual = l_from_zeros(&rs_gamma(&p.dual(), &p2.dual(), &psi.conj(), tr)?);
    let eps = eps_from(&gamma, &l, &l_dual)?;
    Ok(TwistedFactors { gamma, l, eps })
}

fn ps_l(p: &PrincipalSeries, r0: R0, eta: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    if p.is_unitary() {
        tempered_l(p, r0, eta, psi, tr)
    } else if p.is_unramified() && eta.is_unramified() {
        spherical_l(p, r0, eta)
    } else {
        bail!(Usage, "ls-factors", "ramified non-unitary principal series: give it as a Langlands quotient")
    }
}

fn ps_factors(p: &PrincipalSeries, r0: R0, eta: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<TwistedFactors> {
    let gamma = ps_gamma(p, r0, eta, psi, tr)?;
    let l = ps_l(p, r0, eta, psi, tr)?;
    let l_dual = ps_l(&p.dual(), r0, &eta.inv(), &psi.conj(), tr)?;
    let eps = eps_from(&gamma, &l, &l_dual)?;
    Ok(TwistedFactors { gamma, l, eps })
}

fn quotient_l_eps(lq: &LanglandsQuotient, req: &Request, tr: &Tracker) -> Result<(FactoredRF, FactoredRF)> {
    let b = lq.blocks();
    let q = req.q();
    let (mut l, mut eps) = (FactoredRF::one(q), FactoredRF::one(q));
    for (p, s) in b {
        let f = ps_factors(p, req.r0, &req.eta, &req.psi, tr)?;
        l = l.mul(&f.l.shift(s * 2, &req.lattice)?);
        eps = eps.mul(&f.eps.shift(s * 2, &req.lattice)?);
    }
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let f = rs_local_factors(&b[i].0, &b[j].0.times(&req.eta)?, &req.psi, tr)?;
            let s = b[i].1 + b[j].1;
            l = l.mul(&f.l.shift(s, &req.lattice)?);
            eps = eps.mul(&f.eps.shift(s, &req.lattice)?);
        }
    }
    Ok((l, eps))
}

/// `gamma`, `L` and `eps` for tempered or Langlands-quotient data.
///
/// For a quotient, `L` and `eps` are the products of the block and cross
/// factors at the shifted arguments; the identity
/// `gamma = eps · L(1-s, dual) / L(s)` is checked before returning.
pub fn local_factors(req: &Request, tr: &Tracker) -> Result<TwistedFactors> {
    match &req.param {
        Param::Principal(p) => ps_factors(p, req.r0, &req.eta, &req.psi, tr),
        Param::Quotient(lq) => {
            let gamma = twisted_gamma(req, tr)?;
            let (l, eps) = quotient_l_eps(lq, req, tr)?;
            let dual = req.dual();
            let Param::Quotient(dq) = &dual.param else { unreachable!() };
            let (l_dual, _) = quotient_l_eps(dq, &dual, tr)?;
            let rebuilt = eps.mul(&l_dual.reflect()).div(&l);
            if rebuilt != gamma {
                bail!(Consistency, "ls-factors", "gamma {gamma} differs from eps·L(1-s)/L(s) = {rebuilt}");
            }
            Ok(TwistedFactors { gamma, l, eps })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{QPower, Scalar};
    use crate::field::{characters_up_to, turn, TruncatedField};
    use crate::tate::{tate_eps, tate_l};
    use num_rational::Ratio;

    fn setup() -> (TruncatedField, Vec<MultChar>) {
        let r = TruncatedField::new(3, 1, 3).unwrap();
        let chars = characters_up_to(&r, 2, turn(1, 6), QPower::zero());
        (r, chars)
    }

    fn req(chars: Vec<MultChar>, r0: R0, eta: &MultChar) -> Request {
        let psi = AddChar::canonical(eta.field());
        Request::principal(chars, r0, eta.clone(), psi).unwrap()
    }

    #[test]
    fn gspin2_and_gspin3_base_cases() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let eta = chars[4].clone();
        let chi = chars[5].clone();
        assert!(twisted_gamma(&req(vec![chi.clone()], R0::Wedge2, &eta), &tr).unwrap().is_one());
        let g = twisted_gamma(&req(vec![chi.clone()], R0::Sym2, &eta), &tr).unwrap();
        let psi = AddChar::canonical(&r);
        assert_eq!(g, tate_gamma(&chi.mul(&chi).unwrap().mul(&eta).unwrap(), &psi, &tr).unwrap());
    }

    #[test]
    fn n2_products() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let psi = AddChar::canonical(&r);
        let (c1, c2, eta) = (chars[2].clone(), chars[5].clone(), chars[1].clone());
        let tg = |c: MultChar| tate_gamma(&c, &psi, &tr).unwrap();
        let c12 = c1.mul(&c2).unwrap().mul(&eta).unwrap();
        let w = twisted_gamma(&req(vec![c1.clone(), c2.clone()], R0::Wedge2, &eta), &tr).unwrap();
        assert_eq!(w, tg(c12.clone()));
        let s = twisted_gamma(&req(vec![c1.clone(), c2.clone()], R0::Sym2, &eta), &tr).unwrap();
        let expect = tg(c1.mul(&c1).unwrap().mul(&eta).unwrap())
            .mul(&tg(c2.mul(&c2).unwrap().mul(&eta).unwrap()))
            .mul(&tg(c12));
        assert_eq!(s, expect);
    }

    #[test]
    fn rs_is_symmetric() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let psi = AddChar::canonical(&r);
        let p = PrincipalSeries::new(chars[1..3].to_vec()).unwrap();
        let p2 = PrincipalSeries::new(chars[3..6].to_vec()).unwrap();
        assert_eq!(rs_gamma(&p, &p2, &psi, &tr).unwrap(), rs_gamma(&p2, &p, &psi, &tr).unwrap());
        let one = PrincipalSeries::new(vec![MultChar::trivial(&r)]).unwrap();
        let direct = p.chars().iter().fold(FactoredRF::one(3), |acc, c| acc.mul(&tate_gamma(c, &psi, &tr).unwrap()));
        assert_eq!(rs_gamma(&p, &one, &psi, &tr).unwrap(), direct);
    }

    #[test]
    fn spherical_examples() {
        let r = TruncatedField::new(5, 1, 2).unwrap();
        let u = |k: i64| MultChar::unramified(&r, turn(k, 4), QPower::zero());
        let p = PrincipalSeries::new(vec![u(1), u(2)]).unwrap();
        let eta = u(3);
        let w = spherical_l(&p, R0::Wedge2, &eta).unwrap();
        assert_eq!(w, FactoredRF::geometric(Scalar::root(5, 6, 4)));
        assert_eq!(spherical_l(&p, R0::Sym2, &eta).unwrap().factors().len(), 3);
        let single = PrincipalSeries::new(vec![u(1)]).unwrap();
        assert!(spherical_l(&single, R0::Wedge2, &eta).unwrap().is_one());
    }

    #[test]
    fn tempered_l_matches_spherical_and_tate() {
        let r = TruncatedField::new(3, 1, 2).unwrap();
        let tr = Tracker::new();
        let psi = AddChar::canonical(&r);
        let u = |k: i64| MultChar::unramified(&r, turn(k, 6), QPower::zero());
        let p = PrincipalSeries::new(vec![u(1), u(4), u(5)]).unwrap();
        for r0 in [R0::Sym2, R0::Wedge2] {
            assert_eq!(tempered_l(&p, r0, &u(2), &psi, &tr).unwrap(), spherical_l(&p, r0, &u(2)).unwrap());
            let f = local_factors(&req(p.chars().to_vec(), r0, &u(2)), &tr).unwrap();
            assert!(f.eps.is_one());
        }
        let chi = u(1);
        let single = PrincipalSeries::new(vec![chi.clone()]).unwrap();
        let l = tempered_l(&single, R0::Sym2, &MultChar::trivial(&r), &psi, &tr).unwrap();
        assert_eq!(l, tate_l(&chi.mul(&chi).unwrap()));
    }

    #[test]
    fn ramified_tempered_eps_is_gamma() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let eta = chars.iter().find(|c| c.conductor() == 2).unwrap().clone();
        let chi = MultChar::unramified(&r, turn(1, 3), QPower::zero());
        let f = local_factors(&req(vec![chi.clone(), chi], R0::Sym2, &eta), &tr).unwrap();
        assert!(f.l.is_one());
        assert_eq!(f.eps, f.gamma);
        let psi = AddChar::canonical(&r);
        assert_eq!(
            tate_eps(&eta, &psi, &tr).unwrap().pow(3).zpow(),
            f.eps.zpow()
        );
    }

    #[test]
    fn quotient_equals_flattened_gamma() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let psi = AddChar::canonical(&r);
        let eta = chars[3].clone();
        let p1 = PrincipalSeries::new(vec![chars[1].clone(), chars[5].clone()]).unwrap();
        let p2 = PrincipalSeries::new(vec![chars[2].clone()]).unwrap();
        let lq = LanglandsQuotient::new(vec![(p1, Ratio::new(1, 2)), (p2, Ratio::new(-1, 2))]).unwrap();
        let flat = lq.flatten();
        for r0 in [R0::Sym2, R0::Wedge2] {
            let q = Request::new(Param::Quotient(lq.clone()), r0, eta.clone(), psi.clone()).unwrap();
            let f = Request::new(Param::Principal(flat.clone()), r0, eta.clone(), psi.clone()).unwrap();
            assert_eq!(twisted_gamma(&q, &tr).unwrap(), twisted_gamma(&f, &tr).unwrap());
            local_factors(&q, &tr).unwrap();
        }
    }

    #[test]
    fn quotient_with_one_block_at_zero_is_tempered() {
        let (r, chars) = setup();
        let tr = Tracker::new();
        let psi = AddChar::canonical(&r);
        let p = PrincipalSeries::new(chars[1..4].to_vec()).unwrap();
        let lq = LanglandsQuotient::new(vec![(p.clone(), Ratio::new(0, 1))]).unwrap();
        let a = local_factors(&Request::new(Param::Quotient(lq), R0::Sym2, chars[2].clone(), psi.clone()).unwrap(), &tr).unwrap();
        let b = local_factors(&Request::new(Param::Principal(p), R0::Sym2, chars[2].clone(), psi).unwrap(), &tr).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn off_lattice_shift_is_a_precision_error() {
        let (r, chars) = setup();
        let p = PrincipalSeries::new(vec![chars[1].clone()]).unwrap();
        let lq = LanglandsQuotient::new(vec![(p, Ratio::new(1, 3))]).unwrap();
        let q = Request::new(Param::Quotient(lq), R0::Sym2, chars[0].clone(), AddChar::canonical(&r)).unwrap();
        let err = twisted_gamma(&q, &Tracker::new()).unwrap_err();
        assert_eq!(err.kind, crate::ErrorKind::Precision);
    }
}
