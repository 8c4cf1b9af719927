use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclo::{factorize, Cyclo};
use crate::error::{bail, Result};

/// A formal power `q^r` with `r` rational.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPower(pub Ratio<i64>);

impl QPower {
    pub fn zero() -> QPower {
        QPower(Ratio::from_integer(0))
    }

    pub fn new(num: i64, den: i64) -> QPower {
        QPower(Ratio::new(num, den))
    }

    pub fn int(k: i64) -> QPower {
        QPower(Ratio::from_integer(k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::ops::Add for QPower {
    type Output = QPower;
    fn add(self, o: QPower) -> QPower {
        QPower(self.0 + o.0)
    }
}

impl std::ops::Neg for QPower {
    type Output = QPower;
    fn neg(self) -> QPower {
        QPower(-self.0)
    }
}

impl std::ops::Mul<i64> for QPower {
    type Output = QPower;
    fn mul(self, k: i64) -> QPower {
        QPower(self.0 * k)
    }
}

/// Admissible denominators for real shifts of `s`: shifts live in `(1/d)Z`,
/// so every `q`-exponent they produce lies in `(1/2d)Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    d: i64,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice { d: 2 }
    }
}

impl Lattice {
    pub fn new(d: i64) -> Result<Lattice> {
        if d < 1 {
            bail!(Usage, "exact-arith", "lattice denominator must be >= 1, got {d}");
        }
        Ok(Lattice { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn check_shift(&self, s0: Ratio<i64>) -> Result<()> {
        if self.d % s0.denom() != 0 {
            bail!(Precision, "exact-arith", "shift {s0} is off the lattice (1/{})Z", self.d);
        }
        Ok(())
    }

    pub fn check_qpower(&self, r: QPower) -> Result<()> {
        if (2 * self.d) % r.0.denom() != 0 {
            bail!(Precision, "exact-arith", "q-exponent {} is off the lattice (1/{})Z", r.0, 2 * self.d);
        }
        Ok(())
    }
}

/// Residue characteristic and degree of a prime power `q`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, f)] => Some((*p, *f)),
        _ => None,
    }
}

/// A cyclotomic number times a formal power of `q`.
///
/// The cyclotomic part never carries `p`-adic content: any power `p^k`
/// dividing all its coefficients is moved into the exponent as `q^(k/f)`,
/// so equal values have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    q: u64,
    cyclo: Cyclo,
    qexp: QPower,
}

impl Scalar {
    pub fn new(q: u64, cyclo: Cyclo, qexp: QPower) -> Scalar {
        let (p, f) = prime_power(q).expect("q must be a prime power");
        if cyclo.is_zero() {
            return Scalar { q, cyclo, qexp: QPower::zero() };
        }
        let v = cyclo.valuation(p).unwrap_or(0);
        if v == 0 {
            return Scalar { q, cyclo, qexp };
        }
        let pk = BigRational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
        let factor = if v > 0 { pk.recip() } else { pk };
        Scalar { q, cyclo: cyclo.scale(&factor), qexp: qexp + QPower::new(v, f as i64) }
    }

    pub fn one(q: u64) -> Scalar {
        Scalar::new(q, Cyclo::one(), QPower::zero())
    }

    pub fn int(q: u64, n: i64) -> Scalar {
        Scalar::new(q, Cyclo::from_int(n), QPower::zero())
    }

    pub fn from_cyclo(q: u64, c: Cyclo) -> Scalar {
        Scalar::new(q, c, QPower::zero())
    }

    pub fn qpow(q: u64, r: QPower) -> Scalar {
        Scalar::new(q, Cyclo::one(), r)
    }

    pub fn root(q: u64, k: i64, n: u64) -> Scalar {
        Scalar::new(q, Cyclo::root(k, n), QPower::zero())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn cyclo(&self) -> &Cyclo {
        &self.cyclo
    }

    pub fn qexp(&self) -> QPower {
        self.qexp
    }

    pub fn is_zero(&self) -> bool {
        self.cyclo.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.cyclo.is_one() && self.qexp.is_zero()
    }

    fn check_q(&self, other: &Scalar) {
        assert_eq!(self.q, other.q, "scalars over different q");
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_q(other);
        Scalar::new(self.q, self.cyclo.mul(&other.cyclo), self.qexp + other.qexp)
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self.cyclo.inv() {
            Some(c) => Ok(Scalar::new(self.q, c, -self.qexp)),
            None => bail!(Usage, "exact-arith", "inverse of zero scalar"),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::new(self.q, self.cyclo.neg(), self.qexp)
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.q, self.cyclo.conj(), self.qexp)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        match self.cyclo.pow(e) {
            Some(c) => Ok(Scalar::new(self.q, c, self.qexp * e)),
            None => bail!(Usage, "exact-arith", "negative power of zero scalar"),
        }
    }

    pub fn mul_qpow(&self, r: QPower) -> Scalar {
        Scalar { q: self.q, cyclo: self.cyclo.clone(), qexp: self.qexp + r }
    }

    /// Sum of two scalars with the same `q`-exponent (or with a zero summand).
    pub fn add(&self, other: &Scalar) -> Option<Scalar> {
        self.check_q(other);
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.qexp == other.qexp)
            .then(|| Scalar::new(self.q, self.cyclo.add(&other.cyclo), self.qexp))
    }

    /// `|x|^2 = x * conj(x)`, exact.
    pub fn abs_sq(&self) -> Scalar {
        self.mul(&self.conj())
    }

    /// The exponent `r` with `|x|^2 = q^r`, when `|x|^2` is a power of `q`.
    pub fn modulus_sq_qexp(&self) -> Option<QPower> {
        let a = self.abs_sq();
        a.cyclo.is_one().then_some(a.qexp)
    }

    /// True when `x` is a root of unity (no `q`-power).
    pub fn is_root_of_unity(&self) -> bool {
        self.qexp.is_zero() && self.cyclo.abs_sq().is_one() && {
            let n = self.cyclo.order();
            self.cyclo.pow(2 * n as i64).is_some_and(|c| c.is_one())
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = self.qexp.0.to_f64().unwrap_or(f64::NAN);
        self.cyclo.to_complex() * (self.q as f64).powf(r)
    }

    pub fn is_negative_rational(&self) -> bool {
        self.cyclo.as_rational().is_some_and(|r| r.is_negative())
    }

    pub fn is_plus_minus_one_cyclo(&self) -> bool {
        self.cyclo.as_rational().is_some_and(|r| r.abs().is_one())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_scalar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_moves_into_q_power() {
        let s = Scalar::int(3, 9);
        assert_eq!(s, Scalar::qpow(3, QPower::int(2)));
        let t = Scalar::int(4, 2);
        assert_eq!(t.qexp(), QPower::new(1, 2));
        assert!(t.cyclo().is_one());
        assert_eq!(Scalar::int(5, 3).qexp(), QPower::zero());
    }

    #[test]
    fn gauss_sum_norm_is_q_power() {
        let g = Scalar::from_cyclo(3, Cyclo::root(1, 3).sub(&Cyclo::root(2, 3)));
        assert_eq!(g.abs_sq(), Scalar::qpow(3, QPower::int(1)));
        assert_eq!(g.modulus_sq_qexp(), Some(QPower::int(1)));
    }

    #[test]
    fn group_laws() {
        let a = Scalar::new(5, Cyclo::root(1, 4).add(&Cyclo::from_int(2)), QPower::new(1, 2));
        let b = Scalar::root(5, 2, 3).mul_qpow(QPower::new(-3, 4));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(a.pow(3).unwrap(), a.mul(&a).mul(&a));
        assert_eq!(a.pow(-2).unwrap(), a.inv().unwrap().pow(2).unwrap());
    }

    #[test]
    fn lattice_checks() {
        let l = Lattice::default();
        assert!(l.check_shift(Ratio::new(1, 2)).is_ok());
        assert!(l.check_shift(Ratio::new(1, 3)).is_err());
        assert!(l.check_qpower(QPower::new(3, 4)).is_ok());
        assert!(l.check_qpower(QPower::new(1, 8)).is_err());
    }

    #[test]
    fn roots_of_unity_detected() {
        assert!(Scalar::root(3, 1, 12).is_root_of_unity());
        assert!(!Scalar::int(3, 2).is_root_of_unity());
        assert!(!Scalar::qpow(3, QPower::new(1, 2)).is_root_of_unity());
    }
}
