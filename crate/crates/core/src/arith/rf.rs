use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;

use super::scalar::{Lattice, QPower, Scalar};
use crate::error::{bail, Result};

/// `unit * Z^zpow * prod (1 - c Z)^e` with `Z = q^-s`.
///
/// Keys `c` are nonzero and exponents nonzero, so two equal functions have
/// identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredRF {
    q: u64,
    unit: Scalar,
    zpow: i64,
    factors: BTreeMap<Scalar, i64>,
}

impl FactoredRF {
    pub fn one(q: u64) -> FactoredRF {
        FactoredRF::constant(Scalar::one(q))
    }

    pub fn constant(unit: Scalar) -> FactoredRF {
        FactoredRF::monomial(unit, 0)
    }

    pub fn monomial(unit: Scalar, zpow: i64) -> FactoredRF {
        assert!(!unit.is_zero(), "zero unit in factored function");
        FactoredRF { q: unit.q(), unit, zpow, factors: BTreeMap::new() }
    }

    /// `(1 - cZ)^e`.
    pub fn linear(c: Scalar, e: i64) -> FactoredRF {
        let mut f = FactoredRF::one(c.q());
        f.push_factor(c, e);
        f
    }

    /// `1 / (1 - cZ)`.
    pub fn geometric(c: Scalar) -> FactoredRF {
        FactoredRF::linear(c, -1)
    }

    pub fn from_parts(unit: Scalar, zpow: i64, factors: impl IntoIterator<Item = (Scalar, i64)>) -> FactoredRF {
        let mut f = FactoredRF::monomial(unit, zpow);
        for (c, e) in factors {
            f.push_factor(c, e);
        }
        f
    }

    fn push_factor(&mut self, c: Scalar, e: i64) {
        assert!(!c.is_zero(), "zero factor key");
        assert_eq!(c.q(), self.q);
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(c).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.retain(|_, v| *v != 0);
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn unit(&self) -> &Scalar {
        &self.unit
    }

    pub fn zpow(&self) -> i64 {
        self.zpow
    }

    pub fn factors(&self) -> &BTreeMap<Scalar, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.unit.is_one() && self.zpow == 0 && self.factors.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &FactoredRF) -> FactoredRF {
        assert_eq!(self.q, other.q, "factored functions over different q");
        let mut out = FactoredRF::monomial(self.unit.mul(&other.unit), self.zpow + other.zpow);
        out.factors = self.factors.clone();
        for (c, e) in &other.factors {
            out.push_factor(c.clone(), *e);
        }
        out
    }

    pub fn inv(&self) -> FactoredRF {
        FactoredRF {
            q: self.q,
            unit: self.unit.inv().expect("unit is nonzero"),
            zpow: -self.zpow,
            factors: self.factors.iter().map(|(c, e)| (c.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &FactoredRF) -> FactoredRF {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> FactoredRF {
        if k == 0 {
            return FactoredRF::one(self.q);
        }
        FactoredRF {
            q: self.q,
            unit: self.unit.pow(k).expect("unit is nonzero"),
            zpow: self.zpow * k,
            factors: self.factors.iter().map(|(c, e)| (c.clone(), e * k)).collect(),
        }
    }

    pub fn product<'a>(q: u64, items: impl IntoIterator<Item = &'a FactoredRF>) -> FactoredRF {
        items.into_iter().fold(FactoredRF::one(q), |acc, f| acc.mul(f))
    }

    /// `f(s) ↦ f(s + s0)`, i.e. `Z ↦ q^-s0 Z`.
    pub fn shift(&self, s0: Ratio<i64>, lattice: &Lattice) -> Result<FactoredRF> {
        lattice.check_shift(s0)?;
        let r = QPower(-s0);
        Ok(FactoredRF {
            q: self.q,
            unit: self.unit.mul_qpow(r * self.zpow),
            zpow: self.zpow,
            factors: self.factors.iter().map(|(c, e)| (c.mul_qpow(r), *e)).collect(),
        })
    }

    /// `f(s) ↦ f(1 - s)`, i.e. `Z ↦ q^-1 Z^-1`.
    pub fn reflect(&self) -> FactoredRF {
        self.invert_z(QPower::int(-1))
    }

    /// `f(s) ↦ f(-s)`, i.e. `Z ↦ Z^-1`.
    pub fn negate(&self) -> FactoredRF {
        self.invert_z(QPower::zero())
    }

    /// Substitute `Z ↦ q^r Z^-1`, renormalizing `(1 - cZ^-1) = (-c) Z^-1 (1 - c^-1 Z)`.
    fn invert_z(&self, r: QPower) -> FactoredRF {
        let mut unit = self.unit.mul_qpow(r * self.zpow);
        let mut zpow = -self.zpow;
        let mut out = BTreeMap::new();
        for (c, &e) in &self.factors {
            let c = c.mul_qpow(r);
            unit = unit.mul(&c.neg().pow(e).expect("nonzero key"));
            zpow -= e;
            out.insert(c.inv().expect("nonzero key"), e);
        }
        FactoredRF::from_parts(unit, zpow, out)
    }

    /// Complex conjugate of every coefficient.
    pub fn conj_coefficients(&self) -> FactoredRF {
        FactoredRF::from_parts(
            self.unit.conj(),
            self.zpow,
            self.factors.iter().map(|(c, e)| (c.conj(), *e)),
        )
    }

    /// Zeros and poles in `Z != 0` with multiplicity; the monomial part is ignored.
    pub fn zeros_poles(&self) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        for (c, &e) in &self.factors {
            let root = c.inv().expect("nonzero key");
            let target = if e > 0 { &mut zeros } else { &mut poles };
            target.extend(std::iter::repeat(root).take(e.unsigned_abs() as usize));
        }
        (zeros, poles)
    }

    /// Numerical value at complex `s`, with `Z = q^-s`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let z = (-s * (self.q as f64).ln()).exp();
        let mut acc = self.unit.to_complex() * z.powi(self.zpow as i32);
        for (c, &e) in &self.factors {
            let v = Complex64::new(1.0, 0.0) - c.to_complex() * z;
            if e < 0 && v.norm() < 1e-12 {
                bail!(Pole, "exact-arith", "pole of (1 - {}·Z)^{} at s = {}", c, e, s);
            }
            acc *= v.powi(e as i32);
        }
        Ok(acc)
    }

    /// Numerical value as a function of `Z` directly.
    pub fn eval_z(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.unit.to_complex() * z.powi(self.zpow as i32);
        for (c, &e) in &self.factors {
            let v = Complex64::new(1.0, 0.0) - c.to_complex() * z;
            if e < 0 && v.norm() < 1e-12 {
                bail!(Pole, "exact-arith", "pole of (1 - {}·Z)^{} at Z = {}", c, e, z);
            }
            acc *= v.powi(e as i32);
        }
        Ok(acc)
    }
}

impl fmt::Display for FactoredRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_rf(self))
    }
}
