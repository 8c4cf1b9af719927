//! The Galois side: sums of characters of `W_F`, their `Sym^2`/`Wedge^2`
//! twists, Artin factors, and comparisons with the analytic side.
//!
//! Nothing here calls into [`crate::factors`] except [`llc_match`], which
//! exists to compare the two paths.

use crate::arith::FactoredRF;
use crate::error::{bail, Result};
use crate::factors::{local_factors, twisted_gamma, Param, PrincipalSeries, Request, TwistedFactors, R0};
use crate::field::{purity_check, AddChar, AssociationCertificate, MultChar, Purity, Tracker, TruncatedField};
use crate::tate::{tate_eps, tate_l};

/// `sigma = chi_1 ⊕ ... ⊕ chi_n` with trivial monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilParam {
    field: TruncatedField,
    chars: Vec<MultChar>,
}

impl WeilParam {
    pub fn new(field: &TruncatedField, chars: Vec<MultChar>) -> Result<WeilParam> {
        if chars.iter().any(|c| c.field() != field) {
            bail!(Usage, "galois", "Weil parameter characters must live on {field:?}");
        }
        Ok(WeilParam { field: field.clone(), chars })
    }

    pub fn from_principal(p: &PrincipalSeries) -> WeilParam {
        WeilParam { field: p.field().clone(), chars: p.chars().to_vec() }
    }

    pub fn field(&self) -> &TruncatedField {
        &self.field
    }

    pub fn chars(&self) -> &[MultChar] {
        &self.chars
    }

    pub fn dim(&self) -> usize {
        self.chars.len()
    }

    pub fn det(&self) -> MultChar {
        self.chars
            .iter()
            .fold(MultChar::trivial(&self.field), |acc, c| acc.mul(c).expect("same field"))
    }

    pub fn dual(&self) -> WeilParam {
        WeilParam { field: self.field.clone(), chars: self.chars.iter().map(MultChar::inv).collect() }
    }

    pub fn direct_sum(&self, o: &WeilParam) -> Result<WeilParam> {
        let mut chars = self.chars.clone();
        chars.extend(o.chars.iter().cloned());
        WeilParam::new(&self.field, chars)
    }

    /// `sigma ⊗ tau ⊗ eta`.
    pub fn tensor(&self, o: &WeilParam, eta: &MultChar) -> Result<WeilParam> {
        let mut chars = Vec::new();
        for a in &self.chars {
            for b in &o.chars {
                chars.push(a.mul(b)?.mul(eta)?);
            }
        }
        WeilParam::new(&self.field, chars)
    }

    /// `r_0(sigma) ⊗ eta` as a sum of characters.
    pub fn r0_compose(&self, r0: R0, eta: &MultChar) -> Result<WeilParam> {
        let chars = r0
            .pairs(self.dim())
            .into_iter()
            .map(|(i, j)| self.chars[i].mul(&self.chars[j])?.mul(eta))
            .collect::<Result<Vec<_>>>()?;
        WeilParam::new(&self.field, chars)
    }

    /// Carry the parameter across a certificate.
    pub fn transport(&self, cert: &AssociationCertificate) -> Result<WeilParam> {
        let chars = self.chars.iter().map(|c| cert.transport(c)).collect::<Result<Vec<_>>>()?;
        WeilParam::new(&cert.target, chars)
    }

    pub fn max_conductor(&self) -> usize {
        self.chars.iter().map(MultChar::conductor).max().unwrap_or(0)
    }
}

/// `L(s, rho)`, `eps(s, rho, psi)` and `gamma = eps L(1-s, rho^v) / L(s, rho)`.
pub fn artin_factors(rho: &WeilParam, psi: &AddChar, tr: &Tracker) -> Result<TwistedFactors> {
    let q = rho.field.q();
    let mut l = FactoredRF::one(q);
    let mut l_dual = FactoredRF::one(q);
    let mut eps = FactoredRF::one(q);
    for chi in &rho.chars {
        l = l.mul(&tate_l(chi));
        l_dual = l_dual.mul(&tate_l(&chi.inv()));
        eps = eps.mul(&tate_eps(chi, psi, tr)?);
    }
    let gamma = eps.mul(&l_dual.reflect()).div(&l);
    Ok(TwistedFactors { gamma, l, eps })
}

#[derive(Clone, Debug)]
pub struct LlcReport {
    pub analytic: TwistedFactors,
    pub galois: TwistedFactors,
}

impl LlcReport {
    pub fn gamma_equal(&self) -> bool {
        self.analytic.gamma == self.galois.gamma
    }

    pub fn l_equal(&self) -> bool {
        self.analytic.l == self.galois.l
    }

    pub fn eps_equal(&self) -> bool {
        self.analytic.eps == self.galois.eps
    }

    /// Hard failure naming both forms of every factor that differs.
    pub fn check(&self) -> Result<()> {
        let mut bad = Vec::new();
        for (name, a, g) in [
            ("gamma", &self.analytic.gamma, &self.galois.gamma),
            ("L", &self.analytic.l, &self.galois.l),
            ("eps", &self.analytic.eps, &self.galois.eps),
        ] {
            if a != g {
                bad.push(format!("{name}: analytic {a} vs Galois {g}"));
            }
        }
        if !bad.is_empty() {
            bail!(Consistency, "galois", "{}", bad.join("; "));
        }
        Ok(())
    }
}

/// Analytic factors of `req` against the Artin factors of `r_0(sigma) ⊗ eta`.
pub fn llc_match(req: &Request, tr: &Tracker) -> Result<LlcReport> {
    let analytic = local_factors(req, tr)?;
    let sigma = WeilParam::from_principal(&req.param.flatten());
    let galois = artin_factors(&sigma.r0_compose(req.r0, &req.eta)?, &req.psi, tr)?;
    Ok(LlcReport { analytic, galois })
}

#[derive(Clone, Debug)]
pub struct TransferSide {
    pub gamma: FactoredRF,
    pub artin: TwistedFactors,
    pub purity: Purity,
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub source: TransferSide,
    pub target: TransferSide,
    /// Largest conductor among the inputs; no computation should read past it.
    pub read_bound: usize,
}

impl TransferReport {
    pub fn equal(&self) -> bool {
        self.source.gamma == self.target.gamma && self.source.artin == self.target.artin
    }

    pub fn pure(&self) -> bool {
        self.source.purity.ok() && self.target.purity.ok()
    }
}

fn transfer_side(sigma: &WeilParam, r0: R0, eta: &MultChar, psi: &AddChar, certified: usize) -> Result<TransferSide> {
    let tr = Tracker::new();
    let p = PrincipalSeries::new(sigma.chars.clone())?;
    let req = Request::new(Param::Principal(p), r0, eta.clone(), psi.clone())?;
    let gamma = twisted_gamma(&req, &tr)?;
    let artin = artin_factors(&sigma.r0_compose(r0, eta)?, psi, &tr)?;
    Ok(TransferSide { gamma, artin, purity: purity_check(&tr, certified) })
}

/// Compute the twisted factors on both sides of a certificate and compare them.
///
/// `psi_pair` must be one of the additive pairs the certificate was built with.
pub fn deligne_transfer(
    cert: &AssociationCertificate,
    sigma: &WeilParam,
    r0: R0,
    eta: &MultChar,
    psi_pair: (&AddChar, &AddChar),
) -> Result<TransferReport> {
    if !cert.add_chars.iter().any(|(a, b)| a == psi_pair.0 && b == psi_pair.1) {
        bail!(Transfer, "galois", "additive characters were not associated by this certificate");
    }
    if sigma.dim() == 0 {
        bail!(Usage, "galois", "transfer needs a nonempty parameter");
    }
    let sigma2 = sigma.transport(cert)?;
    let eta2 = cert.transport(eta)?;
    let read_bound = sigma.max_conductor().max(eta.conductor());
    let source = transfer_side(sigma, r0, eta, psi_pair.0, read_bound)?;
    let target = transfer_side(&sigma2, r0, &eta2, psi_pair.1, read_bound)?;
    let report = TransferReport { source, target, read_bound };
    if !report.pure() {
        bail!(
            Transfer,
            "galois",
            "purity violated: read levels {} and {} exceed {}",
            report.source.purity.level_read,
            report.target.purity.level_read,
            read_bound
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QPower;
    use crate::field::{associate, characters_up_to, turn};
    use crate::tate::tate_triple;

    fn chars(r: &TruncatedField) -> Vec<MultChar> {
        let a = if r.p() == 2 { 3 } else { 2 };
        characters_up_to(r, a, turn(1, 6), QPower::zero())
    }

    #[test]
    fn plethysm_shapes() {
        let r = TruncatedField::new(3, 1, 2).unwrap();
        let all = chars(&r);
        let eta = all[1].clone();
        let one = WeilParam::new(&r, vec![all[2].clone()]).unwrap();
        assert_eq!(one.r0_compose(R0::Wedge2, &eta).unwrap().dim(), 0);
        let two = WeilParam::new(&r, vec![all[2].clone(), all[3].clone()]).unwrap();
        let s = two.r0_compose(R0::Sym2, &eta).unwrap();
        let sq = |a: &MultChar, b: &MultChar| a.mul(b).unwrap().mul(&eta).unwrap();
        assert_eq!(s.chars(), &[sq(&all[2], &all[2]), sq(&all[2], &all[3]), sq(&all[3], &all[3])]);
    }

    #[test]
    fn additivity_of_plethysm() {
        let r = TruncatedField::new(2, 1, 3).unwrap();
        let all = chars(&r);
        let eta = all[3].clone();
        let sigma = WeilParam::new(&r, all[0..2].to_vec()).unwrap();
        let tau = WeilParam::new(&r, all[2..4].to_vec()).unwrap();
        for r0 in [R0::Sym2, R0::Wedge2] {
            let lhs = sigma.direct_sum(&tau).unwrap().r0_compose(r0, &eta).unwrap();
            let rhs = sigma
                .r0_compose(r0, &eta)
                .unwrap()
                .direct_sum(&tau.r0_compose(r0, &eta).unwrap())
                .unwrap()
                .direct_sum(&sigma.tensor(&tau, &eta).unwrap())
                .unwrap();
            let mut a = lhs.chars().to_vec();
            let mut b = rhs.chars().to_vec();
            let key = |c: &MultChar| format!("{c:?}");
            a.sort_by_key(key);
            b.sort_by_key(key);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn determinant_of_plethysm() {
        let r = TruncatedField::new(3, 1, 2).unwrap();
        let all = chars(&r);
        for n in 1..=4 {
            let sigma = WeilParam::new(&r, (0..n).map(|i| all[(2 * i + 1) % all.len()].clone()).collect()).unwrap();
            let eta = all[4].clone();
            for r0 in [R0::Sym2, R0::Wedge2] {
                let lhs = sigma.r0_compose(r0, &eta).unwrap().det();
                let rhs = sigma
                    .det()
                    .pow(r0.central_exponent(n))
                    .unwrap()
                    .mul(&eta.pow(r0.dim(n) as i64).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "n = {n} {r0:?}");
            }
        }
    }

    #[test]
    fn artin_base_cases() {
        let r = TruncatedField::new(3, 1, 2).unwrap();
        let psi = AddChar::canonical(&r);
        let tr = Tracker::new();
        let empty = artin_factors(&WeilParam::new(&r, vec![]).unwrap(), &psi, &tr).unwrap();
        assert!(empty.gamma.is_one() && empty.l.is_one() && empty.eps.is_one());
        let chi = MultChar::unramified(&r, turn(1, 4), QPower::zero());
        let single = artin_factors(&WeilParam::new(&r, vec![chi.clone()]).unwrap(), &psi, &tr).unwrap();
        let t = tate_triple(&chi, &psi, &tr).unwrap();
        assert_eq!((single.gamma, single.l, single.eps), (t.gamma, t.l, t.eps));
    }

    #[test]
    fn llc_n2_wedge2() {
        let r = TruncatedField::new(2, 1, 3).unwrap();
        let all = chars(&r);
        let tr = Tracker::new();
        for eta in &all {
            let req = Request::principal(vec![all[1].clone(), all[3].clone()], R0::Wedge2, eta.clone(), AddChar::canonical(&r)).unwrap();
            llc_match(&req, &tr).unwrap().check().unwrap();
        }
    }

    #[test]
    fn transfer_between_levels_six_and_nine() {
        let a = TruncatedField::new(3, 1, 6).unwrap();
        let b = TruncatedField::new(3, 1, 9).unwrap();
        let all = chars(&a);
        let sigma = WeilParam::new(&a, vec![all[1].clone(), all[5].clone()]).unwrap();
        let eta = all[3].clone();
        let psi = AddChar::canonical(&a);
        let psi2 = AddChar::canonical(&b);
        let mut tied = sigma.chars().to_vec();
        tied.push(eta.clone());
        let cert = associate(&a, &b, 6, &tied, &[(psi.clone(), psi2.clone())]).unwrap();
        for r0 in [R0::Sym2, R0::Wedge2] {
            let rep = deligne_transfer(&cert, &sigma, r0, &eta, (&psi, &psi2)).unwrap();
            assert!(rep.equal());
            assert!(rep.source.purity.level_read <= 2);
        }
        let stray = AddChar::with_conductor(&b, 1);
        assert!(deligne_transfer(&cert, &sigma, R0::Sym2, &eta, (&psi, &stray)).is_err());
    }
}
