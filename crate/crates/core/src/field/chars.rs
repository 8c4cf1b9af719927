use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use super::ring::TruncatedField;
use super::tracker::Tracker;
use super::units::UnitGroup;
use crate::arith::{QPower, Scalar};
use crate::error::{bail, Result};

/// An element of `Q/Z`, kept in `[0, 1)`; stands for `exp(2 pi i t)`.
pub type Turn = Ratio<i64>;

pub fn turn(num: i64, den: i64) -> Turn {
    normalize(Ratio::new(num, den))
}

pub fn normalize(t: Turn) -> Turn {
    t - t.floor()
}

pub fn turn_scalar(q: u64, t: Turn) -> Scalar {
    Scalar::root(q, *t.numer(), *t.denom() as u64)
}

/// A multiplicative character `F^x -> C^x` of conductor `a`.
///
/// The unit part is stored as images of the generators of `(R_a)^x` (see
/// [`UnitGroup`]), so the data does not depend on the ambient level. The
/// value at the uniformizer is a root of unity times `q^r`.
#[derive(Clone, Debug)]
pub struct MultChar {
    field: TruncatedField,
    conductor: usize,
    pi_turn: Turn,
    pi_qexp: QPower,
    images: Vec<Turn>,
    group: Arc<UnitGroup>,
}

impl PartialEq for MultChar {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.conductor == o.conductor
            && self.pi_turn == o.pi_turn
            && self.pi_qexp == o.pi_qexp
            && self.images == o.images
    }
}

impl Eq for MultChar {}

impl Hash for MultChar {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (&self.field, self.conductor, self.pi_turn, self.pi_qexp, &self.images).hash(h)
    }
}

fn value_on(group: &UnitGroup, images: &[Turn], u: &[u8]) -> Turn {
    let exps = group.dlog(u);
    normalize(images.iter().zip(exps).map(|(t, e)| t * e as i64).sum())
}

/// True conductor of the character with the given images on the level-`a` generators.
fn conductor_of(field: &TruncatedField, group: &UnitGroup, images: &[Turn]) -> usize {
    let a = group.level();
    let k = field.fq();
    for j in (1..a).rev() {
        for l in 0..field.f() {
            let mut el = field.one(a);
            el[j] = k.basis(l);
            if !value_on(group, images, &el).is_zero() {
                return j + 1;
            }
        }
    }
    if a >= 1 && !images[0].is_zero() {
        1
    } else {
        0
    }
}

impl MultChar {
    pub fn new(
        field: &TruncatedField,
        conductor: usize,
        pi_turn: Turn,
        pi_qexp: QPower,
        images: Vec<Turn>,
    ) -> Result<MultChar> {
        if conductor > field.level() {
            bail!(
                Validation,
                "local-field",
                "conductor {conductor} needs level {conductor}, field has level {}",
                field.level()
            );
        }
        let group = UnitGroup::new(field, conductor);
        if images.len() != group.generators().len() {
            bail!(
                Validation,
                "local-field",
                "conductor {conductor} expects {} generator images, got {}",
                group.generators().len(),
                images.len()
            );
        }
        let images: Vec<Turn> = images.into_iter().map(normalize).collect();
        for (g, t) in group.generators().iter().zip(&images) {
            if !(t * g.order as i64).is_integer() {
                bail!(Validation, "local-field", "image {t} has order not dividing {}", g.order);
            }
        }
        let actual = conductor_of(field, &group, &images);
        if actual != conductor {
            bail!(Validation, "local-field", "claimed conductor {conductor} but the images have conductor {actual}");
        }
        Ok(MultChar {
            field: field.clone(),
            conductor,
            pi_turn: normalize(pi_turn),
            pi_qexp,
            images,
            group: Arc::new(group),
        })
    }

    /// The character with the given images on the generators of `(R_level)^x`,
    /// with its conductor worked out.
    pub fn from_level_images(
        field: &TruncatedField,
        level: usize,
        pi_turn: Turn,
        pi_qexp: QPower,
        images: &[Turn],
    ) -> Result<MultChar> {
        if level > field.level() {
            bail!(Precision, "local-field", "level {level} exceeds field level {}", field.level());
        }
        let images: Vec<Turn> = images.iter().map(|&t| normalize(t)).collect();
        let big = UnitGroup::new(field, level);
        let a = conductor_of(field, &big, &images);
        let small = UnitGroup::new(field, a);
        let restricted: Vec<Turn> = small
            .generators()
            .iter()
            .map(|g| {
                let mut el = g.element.clone();
                el.resize(level, 0);
                value_on(&big, &images, &el)
            })
            .collect();
        MultChar::new(field, a, pi_turn, pi_qexp, restricted)
    }

    pub fn trivial(field: &TruncatedField) -> MultChar {
        MultChar::unramified(field, Turn::zero(), QPower::zero())
    }

    pub fn unramified(field: &TruncatedField, pi_turn: Turn, pi_qexp: QPower) -> MultChar {
        MultChar::new(field, 0, pi_turn, pi_qexp, vec![]).expect("unramified data is valid")
    }

    pub fn field(&self) -> &TruncatedField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn depth(&self) -> usize {
        self.conductor.saturating_sub(1)
    }

    pub fn pi_turn(&self) -> Turn {
        self.pi_turn
    }

    pub fn pi_qexp(&self) -> QPower {
        self.pi_qexp
    }

    pub fn images(&self) -> &[Turn] {
        &self.images
    }

    pub fn is_unitary(&self) -> bool {
        self.pi_qexp.is_zero()
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 0 && self.pi_turn.is_zero() && self.pi_qexp.is_zero()
    }

    /// `chi(pi)`.
    pub fn pi_value(&self) -> Scalar {
        turn_scalar(self.q(), self.pi_turn).mul_qpow(self.pi_qexp)
    }

    /// `chi(u)` for a unit `u` given to at least `a` coefficients; reads `u[..a]`.
    pub fn unit_turn(&self, u: &[u8], tr: &Tracker) -> Result<Turn> {
        let a = self.conductor;
        if a == 0 {
            return Ok(Turn::zero());
        }
        if u.len() < a {
            bail!(Precision, "local-field", "unit known to {} coefficients, conductor {a} needs {a}", u.len());
        }
        if u[0] == 0 {
            bail!(Usage, "local-field", "character evaluated at a non-unit");
        }
        tr.record(a - 1);
        Ok(value_on(&self.group, &self.images, u))
    }

    /// `chi(pi^v u)`.
    pub fn value(&self, v: i64, u: &[u8], tr: &Tracker) -> Result<Scalar> {
        let t = self.unit_turn(u, tr)?;
        Ok(turn_scalar(self.q(), normalize(self.pi_turn * v + t)).mul_qpow(self.pi_qexp * v))
    }

    fn check_field(&self, o: &MultChar) -> Result<()> {
        if self.field != o.field {
            bail!(Usage, "local-field", "characters on different fields {:?} and {:?}", self.field, o.field);
        }
        Ok(())
    }

    /// Images on the generators of `(R_level)^x`, for `level >= a`.
    pub fn images_at_level(&self, level: usize) -> Vec<Turn> {
        let tr = Tracker::new();
        UnitGroup::new(&self.field, level)
            .generators()
            .iter()
            .map(|g| self.unit_turn(&g.element, &tr).expect("level covers the conductor"))
            .collect()
    }

    pub fn mul(&self, o: &MultChar) -> Result<MultChar> {
        self.check_field(o)?;
        let level = self.conductor.max(o.conductor);
        let images: Vec<Turn> = self
            .images_at_level(level)
            .into_iter()
            .zip(o.images_at_level(level))
            .map(|(a, b)| a + b)
            .collect();
        MultChar::from_level_images(
            &self.field,
            level,
            self.pi_turn + o.pi_turn,
            self.pi_qexp + o.pi_qexp,
            &images,
        )
    }

    pub fn inv(&self) -> MultChar {
        MultChar {
            field: self.field.clone(),
            conductor: self.conductor,
            pi_turn: normalize(-self.pi_turn),
            pi_qexp: -self.pi_qexp,
            images: self.images.iter().map(|t| normalize(-t)).collect(),
            group: self.group.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> Result<MultChar> {
        let images: Vec<Turn> = self.images.iter().map(|t| t * k).collect();
        MultChar::from_level_images(
            &self.field,
            self.conductor,
            self.pi_turn * k,
            self.pi_qexp * k,
            &images,
        )
    }

    /// `chi · |.|^s0`, so that `chi(pi)` picks up `q^-s0`.
    pub fn twist(&self, s0: Ratio<i64>) -> MultChar {
        let mut out = self.clone();
        out.pi_qexp = self.pi_qexp + QPower(-s0);
        out
    }

    /// The same character with `chi(pi)` replaced.
    pub fn with_pi(&self, pi_turn: Turn, pi_qexp: QPower) -> MultChar {
        let mut out = self.clone();
        out.pi_turn = normalize(pi_turn);
        out.pi_qexp = pi_qexp;
        out
    }

    /// The same data on another field with the same residue field.
    pub fn transport(&self, target: &TruncatedField) -> Result<MultChar> {
        if !self.field.same_residue(target) {
            bail!(Association, "local-field", "residue fields differ: {:?} vs {:?}", self.field, target);
        }
        MultChar::new(target, self.conductor, self.pi_turn, self.pi_qexp, self.images.clone())
    }

    /// Order of the restriction to units.
    pub fn unit_order(&self) -> i64 {
        self.images.iter().fold(1, |acc, t| acc.lcm(t.denom()))
    }
}

/// An additive character `psi` of conductor `n`: trivial on `p^n`, not on `p^(n-1)`.
///
/// `psi(x) = psi0(Tr res(u pi^-n x))` where `psi0(y) = exp(2 pi i y / p)`,
/// `res` takes the coefficient of `t^-1`, and `u` is the scale unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AddChar {
    field: TruncatedField,
    conductor: i64,
    scale: Vec<u8>,
}

impl AddChar {
    pub fn new(field: &TruncatedField, conductor: i64, scale: Vec<u8>) -> Result<AddChar> {
        if scale.len() != field.level() {
            bail!(
                Validation,
                "local-field",
                "scale unit has {} coefficients, field level is {}",
                scale.len(),
                field.level()
            );
        }
        if let Some(&c) = scale.iter().find(|&&c| c as usize >= field.fq().q) {
            bail!(Validation, "local-field", "coefficient {c} is not an element of F_{}", field.q());
        }
        if scale[0] == 0 {
            bail!(Validation, "local-field", "scale is not a unit");
        }
        Ok(AddChar { field: field.clone(), conductor, scale })
    }

    pub fn canonical(field: &TruncatedField) -> AddChar {
        AddChar::with_conductor(field, 0)
    }

    pub fn with_conductor(field: &TruncatedField, conductor: i64) -> AddChar {
        AddChar { field: field.clone(), conductor, scale: field.one(field.level()) }
    }

    pub fn field(&self) -> &TruncatedField {
        &self.field
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn scale(&self) -> &[u8] {
        &self.scale
    }

    /// `psi(pi^k w)` as a turn, for a unit `w`.
    ///
    /// This reads coefficient `n - k - 1` of `u w` and nothing above it; every
    /// character sum in the crate goes through here.
    pub fn eval(&self, k: i64, w: &[u8], tr: &Tracker) -> Result<Turn> {
        let idx = self.conductor - k - 1;
        if idx < 0 {
            return Ok(Turn::zero());
        }
        let idx = idx as usize;
        if idx >= self.field.level() || idx >= w.len() {
            bail!(
                Precision,
                "local-field",
                "psi(pi^{k} w) needs coefficient {idx}; available {}",
                self.field.level().min(w.len())
            );
        }
        tr.record(idx);
        let fq = self.field.fq();
        let mut c = 0u8;
        for i in 0..=idx {
            c = fq.add(c, fq.mul(self.scale[i], w[idx - i]));
        }
        Ok(turn(fq.trace(c) as i64, self.field.p() as i64))
    }

    /// `psi^a: x ↦ psi(a x)` for `a = pi^v u`.
    pub fn scaled(&self, v: i64, u: &[u8]) -> Result<AddChar> {
        if u.len() < self.field.level() || u[0] == 0 {
            bail!(Usage, "local-field", "scaling needs a unit given to the field level");
        }
        let scale = self.field.mul(&self.scale, &u[..self.field.level()]);
        Ok(AddChar { field: self.field.clone(), conductor: self.conductor - v, scale })
    }

    /// `psi^-1 = psi^(-1)`.
    pub fn conj(&self) -> AddChar {
        AddChar { field: self.field.clone(), conductor: self.conductor, scale: self.field.neg(&self.scale) }
    }
}

/// All characters of conductor at most `a`, with `chi(pi)` given, in a fixed order.
pub fn characters_up_to(field: &TruncatedField, a: usize, pi_turn: Turn, pi_qexp: QPower) -> Vec<MultChar> {
    let group = UnitGroup::new(field, a);
    let orders: Vec<i64> = group.generators().iter().map(|g| g.order as i64).collect();
    let mut out = Vec::new();
    let mut idx = vec![0i64; orders.len()];
    loop {
        let images: Vec<Turn> = idx.iter().zip(&orders).map(|(&i, &o)| turn(i, o)).collect();
        out.push(MultChar::from_level_images(field, a, pi_turn, pi_qexp, &images).expect("valid images"));
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < orders[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Cyclo;

    fn f(p: u64, fd: u32, m: usize) -> TruncatedField {
        TruncatedField::new(p, fd, m).unwrap()
    }

    #[test]
    fn quadratic_character_mod_3_is_legendre() {
        let r = f(3, 1, 1);
        let chi = MultChar::new(&r, 1, turn(0, 1), QPower::zero(), vec![turn(1, 2)]).unwrap();
        let tr = Tracker::new();
        assert_eq!(chi.value(0, &[1], &tr).unwrap(), Scalar::int(3, 1));
        assert_eq!(chi.value(0, &[2], &tr).unwrap(), Scalar::int(3, -1));
    }

    #[test]
    fn trivial_character_is_one() {
        let r = f(5, 1, 3);
        let chi = MultChar::trivial(&r);
        let tr = Tracker::new();
        for u in r.units(3) {
            assert!(chi.value(2, &u, &tr).unwrap().is_one());
        }
        assert_eq!(tr.level_read(), 0);
    }

    #[test]
    fn wrong_conductor_is_rejected() {
        let r = f(3, 1, 3);
        let err = MultChar::new(&r, 2, turn(0, 1), QPower::zero(), vec![turn(0, 1); 2]).unwrap_err();
        assert_eq!(err.kind, crate::ErrorKind::Validation);
        assert!(MultChar::new(&r, 1, turn(0, 1), QPower::zero(), vec![turn(1, 3)]).is_err());
        assert!(MultChar::new(&r, 4, turn(0, 1), QPower::zero(), vec![]).is_err());
    }

    #[test]
    fn product_and_inverse() {
        let r = f(3, 1, 3);
        let all = characters_up_to(&r, 3, turn(1, 4), QPower::zero());
        assert_eq!(all.len() as u64, r.unit_count(3));
        let quad = all.iter().find(|c| c.conductor() == 1).unwrap();
        assert!(quad.mul(quad).unwrap().is_unramified());
        let tr = Tracker::new();
        for a in all.iter().step_by(2) {
            let t = a.mul(&a.inv()).unwrap();
            assert!(t.is_trivial());
            for b in all.iter().step_by(3) {
                let ab = a.mul(b).unwrap();
                assert!(ab.conductor() <= a.conductor().max(b.conductor()));
                if a.conductor() != b.conductor() {
                    assert_eq!(ab.conductor(), a.conductor().max(b.conductor()));
                }
                for u in r.units(3).step_by(5) {
                    let lhs = ab.value(1, &u, &tr).unwrap();
                    let rhs = a.value(1, &u, &tr).unwrap().mul(&b.value(1, &u, &tr).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for (p, fd, m) in [(2u64, 1u32, 3usize), (3, 1, 2), (2, 2, 2), (5, 1, 2)] {
            let r = f(p, fd, m);
            let tr = Tracker::new();
            for chi in characters_up_to(&r, m, turn(0, 1), QPower::zero()) {
                let n = chi.unit_order();
                let mut v = vec![0i64; n as usize];
                for u in r.units(m) {
                    let t = chi.unit_turn(&u, &tr).unwrap() * n;
                    v[t.to_integer() as usize] += 1;
                }
                let s = Cyclo::from_counts(n as u64, &v);
                if chi.conductor() == 0 {
                    assert_eq!(s, Cyclo::from_int(r.unit_count(m) as i64));
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn twist_changes_only_pi_value() {
        let r = f(5, 1, 2);
        let chi = MultChar::new(&r, 1, turn(1, 3), QPower::zero(), vec![turn(1, 4)]).unwrap();
        let tw = chi.twist(Ratio::new(1, 2));
        assert_eq!(tw.pi_value(), chi.pi_value().mul_qpow(QPower::new(-1, 2)));
        assert_eq!(tw.images(), chi.images());
        assert!(!tw.is_unitary());
    }

    #[test]
    fn additive_conductor_law() {
        let r = f(3, 1, 4);
        let psi = AddChar::canonical(&r);
        let tr = Tracker::new();
        for v in -3i64..=3 {
            let u = vec![2, 1, 0, 2];
            let pa = psi.scaled(v, &u).unwrap();
            assert_eq!(pa.conductor(), psi.conductor() - v);
            let n = pa.conductor();
            let one = r.one(4);
            assert!(pa.eval(n, &one, &tr).unwrap().is_zero());
            let nontrivial = r.units(4).any(|w| !pa.eval(n - 1, &w, &tr).unwrap().is_zero());
            assert!(nontrivial);
        }
    }

    #[test]
    fn additive_character_reads_one_coefficient_window() {
        let r = f(5, 1, 5);
        let psi = AddChar::with_conductor(&r, 1);
        let tr = Tracker::new();
        psi.eval(-2, &[1, 2, 3, 4, 0], &tr).unwrap();
        assert_eq!(tr.level_read(), 3);
        assert!(psi.eval(-6, &[1, 2, 3, 4, 0], &tr).is_err());
    }
}
