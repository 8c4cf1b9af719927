use super::{twisted_gamma, Request};
use crate::arith::{FactoredRF, QPower};
use crate::error::Result;
use crate::field::Tracker;

/// Predicted `gamma(psi^a) / gamma(psi)` for `a = pi^v u`:
/// `omega(a)^(n±1) eta(a)^dim |a|^(dim (s - 1/2))`, with `dim = dim r_0`.
///
/// The `eta` exponent is `dim r_0`, the one forced by
/// `det(r_0 ∘ sigma ⊗ eta) = omega^(n±1) eta^dim`.
pub fn psi_dependence(req: &Request, v: i64, u: &[u8], tr: &Tracker) -> Result<FactoredRF> {
    let p = req.param.flatten();
    let n = p.n();
    let dim = req.r0.dim(n) as i64;
    let omega = p.central().value(v, u, tr)?.pow(req.r0.central_exponent(n))?;
    let eta = req.eta.value(v, u, tr)?.pow(dim)?;
    Ok(FactoredRF::monomial(omega.mul(&eta).mul_qpow(QPower::new(v * dim, 2)), v * dim))
}

/// The computed ratio `gamma(psi^a) / gamma(psi)`.
pub fn psi_ratio(req: &Request, v: i64, u: &[u8], tr: &Tracker) -> Result<FactoredRF> {
    let scaled = req.with_psi(req.psi.scaled(v, u)?);
    Ok(twisted_gamma(&scaled, tr)?.div(&twisted_gamma(req, tr)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;
    use crate::factors::R0;
    use crate::field::{characters_up_to, turn, AddChar, MultChar, TruncatedField};

    #[test]
    fn units_act_trivially_on_unramified_data() {
        let r = TruncatedField::new(3, 1, 2).unwrap();
        let u = |k| MultChar::unramified(&r, turn(k, 4), QPower::zero());
        let req = Request::principal(vec![u(1), u(2)], R0::Sym2, u(3), AddChar::canonical(&r)).unwrap();
        let tr = Tracker::new();
        let unit = vec![2, 1];
        assert!(psi_dependence(&req, 0, &unit, &tr).unwrap().is_one());
        assert!(psi_ratio(&req, 0, &unit, &tr).unwrap().is_one());
    }

    #[test]
    fn wedge2_at_uniformizer() {
        let r = TruncatedField::new(3, 1, 3).unwrap();
        let all = characters_up_to(&r, 2, turn(1, 5), QPower::zero());
        let (c1, c2, eta) = (all[3].clone(), all[4].clone(), all[5].clone());
        let req = Request::principal(vec![c1.clone(), c2.clone()], R0::Wedge2, eta.clone(), AddChar::canonical(&r)).unwrap();
        let tr = Tracker::new();
        let one = r.one(3);
        let pred = psi_dependence(&req, 1, &one, &tr).unwrap();
        let w = c1.pi_value().mul(&c2.pi_value()).mul(&eta.pi_value());
        assert_eq!(pred, FactoredRF::monomial(w.mul(&Scalar::qpow(3, QPower::new(1, 2))), 1));
        assert_eq!(psi_ratio(&req, 1, &one, &tr).unwrap(), pred);
    }

    #[test]
    fn prediction_matches_on_a_small_grid() {
        let r = TruncatedField::new(2, 1, 4).unwrap();
        let all = characters_up_to(&r, 2, turn(1, 3), QPower::zero());
        let tr = Tracker::new();
        let units: Vec<Vec<u8>> = r.units(4).step_by(3).collect();
        for r0 in [R0::Sym2, R0::Wedge2] {
            for (i, eta) in all.iter().enumerate() {
                let chars = vec![all[(i + 1) % all.len()].clone(), all[(i + 2) % all.len()].clone()];
                let req = Request::principal(chars, r0, eta.clone(), AddChar::canonical(&r)).unwrap();
                for v in [-1, 0, 1] {
                    for u in &units {
                        assert_eq!(psi_ratio(&req, v, u, &tr).unwrap(), psi_dependence(&req, v, u, &tr).unwrap());
                    }
                }
            }
        }
    }
}
