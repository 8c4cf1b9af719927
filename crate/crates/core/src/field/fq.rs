use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{bail, Result};

/// Low-order coefficients of the monic Conway polynomial of degree `f >= 2` over `F_p`.
fn conway(p: u64, f: u32) -> Option<&'static [u64]> {
    Some(match (p, f) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (2, 4) => &[1, 1, 0, 0],
        (2, 5) => &[1, 0, 1, 0, 0],
        (2, 6) => &[1, 1, 0, 1, 1, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (5, 2) => &[2, 4],
        (7, 2) => &[3, 6],
        _ => return None,
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors: Vec<u64> = (2..p).filter(|d| (p - 1) % d == 0 && is_prime(*d)).collect();
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    (2..p).find(|&g| factors.iter().all(|r| pow(g, (p - 1) / r) != 1)).expect("primitive root")
}

/// Table-driven arithmetic in `F_q`, `q = p^f <= 64`.
///
/// An element is encoded as the integer whose base-`p` digits are its
/// coordinates in the power basis of the Conway root `x`. For `f = 1` the
/// "Conway root" is the least primitive root mod `p`.
#[derive(Debug)]
pub struct Fq {
    pub p: u64,
    pub f: u32,
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    log: Vec<u32>,
    exp: Vec<u8>,
    trace: Vec<u8>,
    frob: Vec<u8>,
}

impl Fq {
    pub fn get(p: u64, f: u32) -> Result<Arc<Fq>> {
        static CACHE: OnceLock<RwLock<HashMap<(u64, u32), Arc<Fq>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(k) = cache.read().unwrap().get(&(p, f)) {
            return Ok(k.clone());
        }
        let k = Arc::new(Fq::build(p, f)?);
        Ok(cache.write().unwrap().entry((p, f)).or_insert(k).clone())
    }

    fn build(p: u64, f: u32) -> Result<Fq> {
        if !is_prime(p) || f == 0 {
            bail!(Usage, "local-field", "invalid residue data p = {p}, f = {f}");
        }
        let q = p.checked_pow(f).filter(|&q| q <= 64);
        let Some(q) = q else {
            bail!(Usage, "local-field", "q = {p}^{f} exceeds the supported range q <= 64");
        };
        let q = q as usize;
        let modulus: Vec<u64> = if f == 1 {
            vec![(p - least_primitive_root(p)) % p]
        } else {
            match conway(p, f) {
                Some(c) => c.to_vec(),
                None => bail!(Usage, "local-field", "no Conway polynomial tabulated for {p}^{f}"),
            }
        };
        let digits = |mut v: usize| {
            let mut d = vec![0u64; f as usize];
            for x in d.iter_mut() {
                *x = v as u64 % p;
                v /= p as usize;
            }
            d
        };
        let encode = |d: &[u64]| d.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as u8;
                let mut prod = vec![0u64; 2 * f as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (f as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = k - f as usize + i;
                        prod[idx] = (prod[idx] + p * p - c * m % p) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..f as usize]) as u8;
            }
        }
        let gen = if f == 1 { least_primitive_root(p) as usize } else { p as usize };
        let mut exp = vec![0u8; q - 1];
        let mut log = vec![u32::MAX; q];
        let mut x = 1usize;
        for (k, e) in exp.iter_mut().enumerate() {
            *e = x as u8;
            if log[x] != u32::MAX {
                bail!(Consistency, "local-field", "Conway root is not primitive for {p}^{f}");
            }
            log[x] = k as u32;
            x = mul[x * q + gen] as usize;
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = exp[(q - 1 - log[a] as usize) % (q - 1)];
            }
        }
        let mut frob = vec![0u8; q];
        let mut trace = vec![0u8; q];
        for a in 0..q {
            let mut fa = 1usize;
            for _ in 0..p {
                fa = mul[fa * q + a] as usize;
            }
            frob[a] = fa as u8;
        }
        for a in 0..q {
            let mut t = 0usize;
            let mut c = a;
            for _ in 0..f {
                t = add[t * q + c] as usize;
                c = frob[c] as usize;
            }
            debug_assert!(t < p as usize);
            trace[a] = t as u8;
        }
        Ok(Fq { p, f, q, add, mul, neg, inv, log, exp, trace, frob })
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero in F_q");
        self.inv[a as usize]
    }

    /// Discrete log to the base of the Conway root.
    pub fn log(&self, a: u8) -> u32 {
        assert!(a != 0, "log of zero in F_q");
        self.log[a as usize]
    }

    pub fn exp(&self, k: i64) -> u8 {
        self.exp[k.rem_euclid(self.q as i64 - 1) as usize]
    }

    /// Absolute trace to `F_p`, as an integer in `0..p`.
    pub fn trace(&self, a: u8) -> u8 {
        self.trace[a as usize]
    }

    pub fn frobenius(&self, a: u8) -> u8 {
        self.frob[a as usize]
    }

    /// Coordinates of `a` in the basis `(x^l)^(p^k)`, `l < f`.
    pub fn coords_twisted(&self, a: u8, k: u32) -> Vec<u64> {
        let shift = (self.f - k % self.f) % self.f;
        let mut b = a;
        for _ in 0..shift {
            b = self.frobenius(b);
        }
        let mut v = b as u64;
        (0..self.f)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// The basis element `x^l`.
    pub fn basis(&self, l: u32) -> u8 {
        (self.p.pow(l)) as u8
    }

    /// Embed an element of the prime field.
    pub fn from_prime(&self, a: u64) -> u8 {
        (a % self.p) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASES: &[(u64, u32)] =
        &[(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (61, 1)];

    #[test]
    fn conway_root_is_primitive() {
        for &(p, f) in CASES {
            let k = Fq::get(p, f).unwrap();
            let gen = if f == 1 { least_primitive_root(p) as u8 } else { p as u8 };
            let mut x = 1u8;
            for i in 1..k.q {
                x = k.mul(x, gen);
                assert_eq!(x == 1, i == k.q - 1, "{p}^{f}");
            }
        }
    }

    #[test]
    fn field_axioms() {
        for &(p, f) in CASES.iter().filter(|c| c.0.pow(c.1) <= 27) {
            let k = Fq::get(p, f).unwrap();
            let q = k.q as u8;
            for a in 0..q {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a)), 1);
                    assert_eq!(k.exp(k.log(a) as i64), a);
                }
                for b in 0..q {
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in 0..q {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_surjective() {
        for &(p, f) in CASES {
            let k = Fq::get(p, f).unwrap();
            let q = k.q as u8;
            let mut hits = vec![0usize; p as usize];
            for a in 0..q {
                hits[k.trace(a) as usize] += 1;
                for b in 0..q.min(8) {
                    assert_eq!(k.trace(k.add(a, b)) as u64, (k.trace(a) as u64 + k.trace(b) as u64) % p);
                }
            }
            assert!(hits.iter().all(|&h| h == k.q / p as usize));
        }
    }

    #[test]
    fn twisted_coordinates_reconstruct() {
        for &(p, f) in &[(2u64, 3u32), (3, 2), (5, 2), (2, 6)] {
            let k = Fq::get(p, f).unwrap();
            for a in 0..k.q as u8 {
                for e in 0..2 * f {
                    let c = k.coords_twisted(a, e);
                    let mut acc = 0u8;
                    for (l, &d) in c.iter().enumerate() {
                        let mut b = k.basis(l as u32);
                        for _ in 0..e {
                            b = k.frobenius(b);
                        }
                        acc = k.add(acc, k.mul(k.from_prime(d), b));
                    }
                    assert_eq!(acc, a);
                }
            }
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(Fq::get(2, 7).is_err());
        assert!(Fq::get(4, 1).is_err());
        assert!(Fq::get(67, 1).is_err());
    }
}
