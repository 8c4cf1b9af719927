//! Abelian local factors: `L(s, chi)`, `eps(s, chi, psi)` and `gamma(s, chi, psi)`.
//!
//! Conventions. Write `n` for the conductor of `psi` (trivial on `p^n`) and
//! `a` for the conductor of `chi`, and put `d = a - n`. Then
//!
//! ```text
//! G(chi, psi) = sum over u in (O/p^a)^x of chi^-1(pi^-d u) psi(pi^-d u)
//! eps(s, chi, psi) = q^(-n/2) G(chi, psi) Z^d
//! ```
//!
//! For `a = 0` the sum has the single term `chi(pi)^d`. These satisfy
//! `eps = 1` for unramified `chi` and `n = 0`, `|eps(1/2)| = 1` for unitary
//! `chi`, the functional equation and `eps(chi, psi^c) = chi(c) |c|^(s-1/2) eps(chi, psi)`.

use num_integer::Integer;

use crate::arith::{FactoredRF, QPower, Scalar};
use crate::error::{bail, Result};
use crate::field::{AddChar, MultChar, Tracker};
use crate::par::{self, Mode};
use crate::Cyclo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Unramified,
    GaussSum,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Unramified => "unramified formula",
            Provenance::GaussSum => "Gauss sum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianFactorTriple {
    pub l: FactoredRF,
    pub eps: FactoredRF,
    pub gamma: FactoredRF,
    pub provenance: Provenance,
}

pub fn tate_l(chi: &MultChar) -> FactoredRF {
    if chi.is_unramified() {
        FactoredRF::geometric(chi.pi_value())
    } else {
        FactoredRF::one(chi.q())
    }
}

fn check_fields(chi: &MultChar, psi: &AddChar) -> Result<()> {
    if chi.field() != psi.field() {
        bail!(Usage, "tate", "chi on {:?} but psi on {:?}", chi.field(), psi.field());
    }
    Ok(())
}

/// `G(chi, psi)` for `a(chi) >= 1`.
pub fn gauss_sum(chi: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<Scalar> {
    if chi.is_unramified() {
        bail!(Usage, "tate", "Gauss sum needs a ramified character");
    }
    gauss_sum_with(Mode::default(), chi, psi, tr)
}

pub fn gauss_sum_with(mode: Mode, chi: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<Scalar> {
    check_fields(chi, psi)?;
    let a = chi.conductor();
    let d = a as i64 - psi.conductor();
    let q = chi.q();
    let front = chi.pi_value().pow(d)?;
    if a == 0 {
        return Ok(front);
    }
    let field = chi.field();
    let width = chi.unit_order().lcm(&(field.p() as i64));
    let counts = par::counts(mode, field.unit_count(a) as usize, width as usize, |i| {
        let u = field.unit_at(a, i as u64);
        let t = psi.eval(-d, &u, tr)? - chi.unit_turn(&u, tr)?;
        Ok((crate::field::normalize(t) * width).to_integer() as usize)
    })?;
    Ok(front.mul(&Scalar::from_cyclo(q, Cyclo::from_counts(width as u64, &counts))))
}

pub fn tate_eps(chi: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    check_fields(chi, psi)?;
    let d = chi.conductor() as i64 - psi.conductor();
    let g = gauss_sum_with(Mode::default(), chi, psi, tr)?;
    Ok(FactoredRF::monomial(g.mul_qpow(QPower::new(-psi.conductor(), 2)), d))
}

pub fn tate_gamma(chi: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    Ok(tate_triple(chi, psi, tr)?.gamma)
}

pub fn tate_triple(chi: &MultChar, psi: &AddChar, tr: &Tracker) -> Result<AbelianFactorTriple> {
    let l = tate_l(chi);
    let eps = tate_eps(chi, psi, tr)?;
    let gamma = eps.mul(&tate_l(&chi.inv()).reflect()).div(&l);
    let provenance = if chi.is_unramified() { Provenance::Unramified } else { Provenance::GaussSum };
    Ok(AbelianFactorTriple { l, eps, gamma, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Lattice;
    use crate::field::{characters_up_to, turn, TruncatedField};
    use num_rational::Ratio;

    fn field(p: u64, f: u32, m: usize) -> TruncatedField {
        TruncatedField::new(p, f, m).unwrap()
    }

    fn legendre3() -> MultChar {
        MultChar::new(&field(3, 1, 1), 1, turn(0, 1), QPower::zero(), vec![turn(1, 2)]).unwrap()
    }

    #[test]
    fn l_factors() {
        let r = field(5, 1, 2);
        assert_eq!(tate_l(&MultChar::trivial(&r)).to_string(), "1/(1 - Z)");
        let chi = MultChar::unramified(&r, turn(1, 4), QPower::zero());
        assert_eq!(tate_l(&chi), FactoredRF::geometric(Scalar::root(5, 1, 4)));
        assert!(tate_l(&legendre3()).is_one());
    }

    #[test]
    fn quadratic_gauss_sum_mod_3() {
        let chi = legendre3();
        let psi = AddChar::canonical(chi.field());
        let g = gauss_sum(&chi, &psi, &Tracker::new()).unwrap();
        let expect = Cyclo::root(1, 3).sub(&Cyclo::root(2, 3));
        assert_eq!(g, Scalar::from_cyclo(3, expect.clone()));
        let eps = tate_eps(&chi, &psi, &Tracker::new()).unwrap();
        assert_eq!(eps, FactoredRF::monomial(Scalar::from_cyclo(3, expect), 1));
        assert_eq!(tate_gamma(&chi, &psi, &Tracker::new()).unwrap(), eps);
    }

    #[test]
    fn trivial_gamma() {
        let r = field(3, 1, 2);
        let g = tate_gamma(&MultChar::trivial(&r), &AddChar::canonical(&r), &Tracker::new()).unwrap();
        assert_eq!(g.to_string(), "-q·Z·(1 - Z)/(1 - q·Z)");
    }

    #[test]
    fn unramified_eps_with_shifted_psi() {
        let r = field(5, 1, 2);
        let chi = MultChar::unramified(&r, turn(1, 3), QPower::zero());
        let tr = Tracker::new();
        assert!(tate_eps(&chi, &AddChar::canonical(&r), &tr).unwrap().is_one());
        let psi = AddChar::with_conductor(&r, -1);
        let eps = tate_eps(&chi, &psi, &tr).unwrap();
        assert_eq!(eps, FactoredRF::monomial(Scalar::root(5, 1, 3).mul_qpow(QPower::new(1, 2)), 1));
        assert_eq!(tr.level_read(), 0);
    }

    #[test]
    fn functional_equation_and_modulus() {
        for (p, f, m) in [(2u64, 1u32, 3usize), (3, 1, 3), (5, 1, 2), (2, 2, 2)] {
            let r = field(p, f, m);
            for n in [-1i64, 0, 1] {
                let psi = AddChar::with_conductor(&r, n);
                for chi in characters_up_to(&r, m.min(3), turn(1, 2), QPower::zero()) {
                    if (chi.conductor() as i64) < n + 1 - m as i64 {
                        continue;
                    }
                    let tr = Tracker::new();
                    let g = tate_gamma(&chi, &psi, &tr).unwrap();
                    let gd = tate_gamma(&chi.inv(), &psi.conj(), &tr).unwrap();
                    assert!(g.mul(&gd.reflect()).is_one(), "{chi:?}");
                    let eps = tate_eps(&chi, &psi, &tr).unwrap();
                    let half = eps.unit().mul_qpow(QPower::new(-eps.zpow(), 2));
                    assert!(half.abs_sq().is_one());
                }
            }
        }
    }

    #[test]
    fn purity_of_conductor_one_sum() {
        let r = field(3, 1, 5);
        let chi = characters_up_to(&r, 1, turn(0, 1), QPower::zero())
            .into_iter()
            .find(|c| c.conductor() == 1)
            .unwrap();
        let tr = Tracker::new();
        tate_gamma(&chi, &AddChar::canonical(&r), &tr).unwrap();
        assert!(tr.level_read() <= 1);
        let chi3 = characters_up_to(&r, 3, turn(0, 1), QPower::zero())
            .into_iter()
            .find(|c| c.conductor() == 3)
            .unwrap();
        let tr = Tracker::new();
        tate_gamma(&chi3, &AddChar::canonical(&r), &tr).unwrap();
        assert!(tr.level_read() <= 3);
        let tr = Tracker::new();
        tate_l(&MultChar::trivial(&r));
        assert_eq!(tr.level_read(), 0);
    }

    #[test]
    fn unramified_twist_is_a_shift() {
        let r = field(3, 1, 2);
        let psi = AddChar::canonical(&r);
        let lat = Lattice::default();
        for chi in characters_up_to(&r, 2, turn(1, 4), QPower::zero()) {
            let s0 = Ratio::new(1, 2);
            let lhs = tate_gamma(&chi.twist(s0), &psi, &Tracker::new()).unwrap();
            let rhs = tate_gamma(&chi, &psi, &Tracker::new()).unwrap().shift(s0, &lat).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sequential_and_parallel_sums_agree() {
        let r = field(2, 2, 3);
        let psi = AddChar::canonical(&r);
        for chi in characters_up_to(&r, 3, turn(0, 1), QPower::zero()).iter().step_by(5) {
            let tr = Tracker::new();
            assert_eq!(
                gauss_sum_with(Mode::Sequential, chi, &psi, &tr).unwrap(),
                gauss_sum_with(Mode::Parallel, chi, &psi, &tr).unwrap()
            );
        }
    }
}
