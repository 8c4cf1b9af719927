use std::collections::HashMap;
use std::ops::{AddAssign, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
struct Comp {
    p: u64,
    e: u32,
    pe: u64,
    phi: u64,
    sub: u64,
}

/// Tensor power basis of `Q(zeta_N)` over the prime-power factors of `N`.
///
/// A basis vector is `prod_c zeta_{p_c^e_c}^{i_c}` with `i_c < phi(p_c^e_c)`.
/// Indices are mixed radix with the first component most significant.
#[derive(Debug)]
pub(crate) struct Basis {
    n: u64,
    comps: Vec<Comp>,
    dim: usize,
    digits: Vec<Vec<u64>>,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i128) as u64
}

impl Basis {
    fn new(n: u64) -> Basis {
        let comps: Vec<Comp> = factorize(n)
            .into_iter()
            .map(|(p, e)| {
                let sub = p.pow(e - 1);
                Comp { p, e, pe: sub * p, phi: sub * (p - 1), sub }
            })
            .collect();
        let dim = comps.iter().map(|c| c.phi as usize).product();
        let mut digits = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut rem = idx as u64;
            let mut d = vec![0; comps.len()];
            for (c, comp) in comps.iter().enumerate().rev() {
                d[c] = rem % comp.phi;
                rem /= comp.phi;
            }
            digits.push(d);
        }
        Basis { n, comps, dim, digits }
    }

    pub(crate) fn get(n: u64) -> Arc<Basis> {
        static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Basis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(b) = cache.read().unwrap().get(&n) {
            return b.clone();
        }
        let b = Arc::new(Basis::new(n));
        cache.write().unwrap().entry(n).or_insert(b).clone()
    }

    fn full_index(&self, digits: &[u64]) -> usize {
        let mut idx = 0u64;
        for (d, comp) in digits.iter().zip(&self.comps) {
            idx = idx * comp.pe + d;
        }
        idx as usize
    }

    fn basis_index(&self, digits: &[u64]) -> usize {
        let mut idx = 0u64;
        for (d, comp) in digits.iter().zip(&self.comps) {
            idx = idx * comp.phi + d;
        }
        idx as usize
    }

    /// Digits of `zeta_N^k` as a product of prime-power roots.
    fn root_digits(&self, k: u64) -> Vec<u64> {
        self.comps
            .iter()
            .map(|c| {
                let cof = self.n / c.pe;
                (k % c.pe) * mod_inverse(cof % c.pe, c.pe) % c.pe
            })
            .collect()
    }

    /// Exponent `k` with `zeta_N^k` equal to the basis monomial of `digits`.
    fn exponent(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .zip(&self.comps)
            .map(|(d, c)| d * (self.n / c.pe))
            .sum::<u64>()
            % self.n
    }

    /// Reduce a group-ring vector (mixed radix `p^e`) to the basis.
    fn reduce<T>(&self, full: Vec<T>) -> Vec<T>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
    {
        let mut radices: Vec<u64> = self.comps.iter().map(|c| c.pe).collect();
        let mut cur = full;
        for (c, comp) in self.comps.iter().enumerate() {
            let mut next_rad = radices.clone();
            next_rad[c] = comp.phi;
            let len: u64 = next_rad.iter().product();
            let mut next = vec![T::zero(); len as usize];
            let mut digits = vec![0u64; radices.len()];
            for (idx, v) in cur.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut rem = idx as u64;
                for k in (0..radices.len()).rev() {
                    digits[k] = rem % radices[k];
                    rem /= radices[k];
                }
                let enc = |digits: &[u64]| {
                    digits.iter().zip(&next_rad).fold(0u64, |acc, (d, r)| acc * r + d) as usize
                };
                if digits[c] < comp.phi {
                    next[enc(&digits)] += v;
                } else {
                    let d0 = digits[c];
                    for k in 1..comp.p {
                        digits[c] = d0 - k * comp.sub;
                        next[enc(&digits)] -= v;
                    }
                }
            }
            radices = next_rad;
            cur = next;
        }
        cur
    }
}

/// An element of a cyclotomic field, stored in the smallest `Q(zeta_N)` containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo {
    order: u64,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Cyclo {
    pub fn zero() -> Cyclo {
        Cyclo { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Cyclo {
        Cyclo::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Cyclo {
        Cyclo::from_rational(rat(n))
    }

    pub fn from_rational(r: BigRational) -> Cyclo {
        Cyclo { order: 1, coeffs: vec![r] }
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn root(k: i64, n: u64) -> Cyclo {
        assert!(n > 0);
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        let (k, n) = if k == 0 { (0, 1) } else { (k / g, n / g) };
        let mut counts = vec![0i64; n as usize];
        counts[k as usize] = 1;
        Cyclo::from_counts(n, &counts)
    }

    /// `sum_k counts[k] * zeta_n^k`.
    pub fn from_counts(n: u64, counts: &[i64]) -> Cyclo {
        assert_eq!(counts.len() as u64, n);
        let basis = Basis::get(n);
        let mut full = vec![0i64; n as usize];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                full[basis.full_index(&basis.root_digits(k as u64))] += c;
            }
        }
        let reduced = basis.reduce(full);
        Cyclo::canonical(n, reduced.into_iter().map(rat).collect())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn canonical(mut order: u64, mut coeffs: Vec<BigRational>) -> Cyclo {
        if coeffs.iter().all(Zero::is_zero) {
            return Cyclo::zero();
        }
        'outer: loop {
            let basis = Basis::get(order);
            for (c, comp) in basis.comps.iter().enumerate() {
                let descends = coeffs.iter().zip(&basis.digits).all(|(v, d)| {
                    v.is_zero() || if comp.e == 1 { d[c] == 0 } else { d[c] % comp.p == 0 }
                });
                if !descends {
                    continue;
                }
                let new_order = order / comp.p;
                let nb = Basis::get(new_order);
                let mut next = vec![BigRational::zero(); nb.dim];
                for (v, d) in coeffs.iter().zip(&basis.digits) {
                    if v.is_zero() {
                        continue;
                    }
                    let mut nd = d.clone();
                    if comp.e == 1 {
                        nd.remove(c);
                    } else {
                        nd[c] /= comp.p;
                    }
                    next[nb.basis_index(&nd)] = v.clone();
                }
                order = new_order;
                coeffs = next;
                continue 'outer;
            }
            break;
        }
        Cyclo { order, coeffs }
    }

    /// Coefficients in the basis of `Q(zeta_m)`; `m` must be a multiple of the order.
    fn embed(&self, m: u64) -> Vec<BigRational> {
        if m == self.order {
            return self.coeffs.clone();
        }
        assert_eq!(m % self.order, 0);
        let src = Basis::get(self.order);
        let dst = Basis::get(m);
        let mut out = vec![BigRational::zero(); dst.dim];
        for (v, d) in self.coeffs.iter().zip(&src.digits) {
            if v.is_zero() {
                continue;
            }
            let nd: Vec<u64> = dst
                .comps
                .iter()
                .map(|dc| match src.comps.iter().position(|sc| sc.p == dc.p) {
                    Some(i) => d[i] * (dc.pe / src.comps[i].pe),
                    None => 0,
                })
                .collect();
            out[dst.basis_index(&nd)] = v.clone();
        }
        out
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let m = self.order.lcm(&other.order);
        let mut a = self.embed(m);
        for (x, y) in a.iter_mut().zip(other.embed(m)) {
            *x += y;
        }
        Cyclo::canonical(m, a)
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::zero();
        }
        Cyclo { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        if let Some(r) = self.as_rational() {
            return other.scale(r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(r);
        }
        let m = self.order.lcm(&other.order);
        let basis = Basis::get(m);
        let a = self.embed(m);
        let b = other.embed(m);
        let mut full = vec![BigRational::zero(); m as usize];
        let mut digits = vec![0u64; basis.comps.len()];
        for (x, dx) in a.iter().zip(&basis.digits) {
            if x.is_zero() {
                continue;
            }
            for (y, dy) in b.iter().zip(&basis.digits) {
                if y.is_zero() {
                    continue;
                }
                for (c, comp) in basis.comps.iter().enumerate() {
                    digits[c] = (dx[c] + dy[c]) % comp.pe;
                }
                full[basis.full_index(&digits)] += x * y;
            }
        }
        Cyclo::canonical(m, basis.reduce(full))
    }

    /// Image under the automorphism `zeta ↦ zeta^k` (k coprime to the order).
    pub fn galois(&self, k: i64) -> Cyclo {
        let n = self.order;
        let k = k.rem_euclid(n as i64) as u64;
        let basis = Basis::get(n);
        let mut full = vec![BigRational::zero(); n as usize];
        let mut digits = vec![0u64; basis.comps.len()];
        for (v, d) in self.coeffs.iter().zip(&basis.digits) {
            if v.is_zero() {
                continue;
            }
            for (c, comp) in basis.comps.iter().enumerate() {
                digits[c] = d[c] * k % comp.pe;
            }
            full[basis.full_index(&digits)] += v;
        }
        Cyclo::canonical(n, basis.reduce(full))
    }

    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    /// `x * conj(x)`.
    pub fn abs_sq(&self) -> Cyclo {
        self.mul(&self.conj())
    }

    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyclo::from_rational(r.recip()));
        }
        let c = self.conj();
        if let Some(r) = self.mul(&c).as_rational() {
            return Some(c.scale(&r.recip()));
        }
        let n = self.order as i64;
        let mut rest = Cyclo::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                rest = rest.mul(&self.galois(k));
            }
        }
        let norm = self.mul(&rest);
        let r = norm.as_rational().expect("field norm is rational").clone();
        Some(rest.scale(&r.recip()))
    }

    pub fn pow(&self, e: i64) -> Option<Cyclo> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }

    /// Nonzero terms as `(k, c)` meaning `c * zeta_N^k`, sorted by `k`.
    pub fn terms(&self) -> Vec<(u64, BigRational)> {
        let basis = Basis::get(self.order);
        let mut out: Vec<(u64, BigRational)> = self
            .coeffs
            .iter()
            .zip(&basis.digits)
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, d)| (basis.exponent(d), v.clone()))
            .collect();
        out.sort();
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.terms()
            .into_iter()
            .map(|(k, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(c, std::f64::consts::TAU * k as f64 / n)
            })
            .sum()
    }

    /// Minimum `p`-adic valuation over the nonzero coefficients.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        let p = BigInt::from(p);
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| int_valuation(c.numer(), &p) - int_valuation(c.denom(), &p))
            .min()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// True for a positive rational number.
    pub fn is_positive_rational(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_positive())
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    while !x.is_zero() && (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn roots_multiply_like_exponents() {
        for n in [1u64, 2, 3, 4, 6, 8, 9, 12, 15, 20, 36] {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let lhs = Cyclo::root(a, n).mul(&Cyclo::root(b, n));
                    assert_eq!(lhs, Cyclo::root(a + b, n), "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn canonical_order_is_minimal() {
        assert_eq!(Cyclo::root(2, 4).order(), 1);
        assert_eq!(Cyclo::root(1, 2), Cyclo::from_int(-1));
        assert_eq!(Cyclo::root(3, 6).order(), 1);
        assert_eq!(Cyclo::root(1, 6).order(), 3);
        assert_eq!(Cyclo::root(6, 36).order(), 3);
        assert_eq!(Cyclo::root(4, 12).order(), 3);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in [2u64, 3, 4, 5, 8, 9, 12, 25, 27] {
            let counts = vec![1i64; n as usize];
            assert!(Cyclo::from_counts(n, &counts).is_zero(), "n={n}");
        }
    }

    #[test]
    fn complex_embedding_matches_exp() {
        for n in [3u64, 4, 5, 7, 12, 20] {
            for k in 0..n as i64 {
                let z = Cyclo::root(k, n).to_complex();
                let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
                assert!(close(z, w), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn conj_and_inverse() {
        let x = Cyclo::root(1, 5).add(&Cyclo::from_int(2)).add(&Cyclo::root(2, 3));
        assert_eq!(x.conj().conj(), x);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert!(close(x.conj().to_complex(), x.to_complex().conj()));
        assert!(Cyclo::root(1, 7).abs_sq().is_one());
    }

    #[test]
    fn terms_report_exponents() {
        let x = Cyclo::root(1, 3).sub(&Cyclo::root(2, 3));
        let t = x.terms();
        assert_eq!(x.order(), 3);
        assert_eq!(t.iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![0, 1]);
        assert!(close(x.to_complex(), Complex64::new(0.0, 3f64.sqrt())));
    }

    #[test]
    fn valuation_of_content() {
        let x = Cyclo::root(1, 3).scale(&BigRational::new(9.into(), 2.into()));
        assert_eq!(x.valuation(3), Some(2));
        assert_eq!(x.valuation(2), Some(-1));
    }
}
