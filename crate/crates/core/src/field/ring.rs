use std::fmt;
use std::sync::Arc;

use super::fq::Fq;
use crate::error::{bail, Result};

/// The ring `R_m = F_q[t]/(t^m)`, standing in for `O/p^m` of any local field
/// with residue field `F_q`.
///
/// Elements are coefficient vectors over `F_q`; ring operations truncate to
/// the shorter operand, so the same helpers serve every level `<= m`.
#[derive(Clone)]
pub struct TruncatedField {
    fq: Arc<Fq>,
    level: usize,
}

impl PartialEq for TruncatedField {
    fn eq(&self, other: &Self) -> bool {
        self.fq.p == other.fq.p && self.fq.f == other.fq.f && self.level == other.level
    }
}

impl Eq for TruncatedField {}

impl std::hash::Hash for TruncatedField {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        (self.fq.p, self.fq.f, self.level).hash(h)
    }
}

impl fmt::Debug for TruncatedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[t]/(t^{})", self.fq.q, self.level)
    }
}

impl TruncatedField {
    pub fn new(p: u64, f: u32, level: usize) -> Result<TruncatedField> {
        if level == 0 {
            bail!(Usage, "local-field", "level must be at least 1");
        }
        Ok(TruncatedField { fq: Fq::get(p, f)?, level })
    }

    pub fn with_level(&self, level: usize) -> Result<TruncatedField> {
        TruncatedField::new(self.fq.p, self.fq.f, level)
    }

    pub fn p(&self) -> u64 {
        self.fq.p
    }

    pub fn f(&self) -> u32 {
        self.fq.f
    }

    pub fn q(&self) -> u64 {
        self.fq.q as u64
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn same_residue(&self, other: &TruncatedField) -> bool {
        self.fq.p == other.fq.p && self.fq.f == other.fq.f
    }

    pub fn one(&self, len: usize) -> Vec<u8> {
        let mut v = vec![0u8; len];
        if len > 0 {
            v[0] = 1;
        }
        v
    }

    pub fn add(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.fq.add(x, y)).collect()
    }

    pub fn neg(&self, a: &[u8]) -> Vec<u8> {
        a.iter().map(|&x| self.fq.neg(x)).collect()
    }

    pub fn scale(&self, c: u8, a: &[u8]) -> Vec<u8> {
        a.iter().map(|&x| self.fq.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let n = a.len().min(b.len());
        let mut out = vec![0u8; n];
        for (i, &x) in a[..n].iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b[..n - i].iter().enumerate() {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(x, y));
            }
        }
        out
    }

    pub fn is_unit(&self, a: &[u8]) -> bool {
        a.first().is_some_and(|&x| x != 0)
    }

    pub fn inv(&self, a: &[u8]) -> Option<Vec<u8>> {
        if !self.is_unit(a) {
            return None;
        }
        let k = &self.fq;
        let b0 = k.inv(a[0]);
        let mut b = vec![0u8; a.len()];
        b[0] = b0;
        for n in 1..a.len() {
            let mut s = 0u8;
            for i in 1..=n {
                s = k.add(s, k.mul(a[i], b[n - i]));
            }
            b[n] = k.neg(k.mul(b0, s));
        }
        Some(b)
    }

    pub fn pow(&self, a: &[u8], mut e: u64) -> Vec<u8> {
        let mut acc = self.one(a.len());
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `|(R_len)^x| = (q - 1) q^(len - 1)`.
    pub fn unit_count(&self, len: usize) -> u64 {
        if len == 0 {
            1
        } else {
            (self.q() - 1) * self.q().pow(len as u32 - 1)
        }
    }

    /// The `idx`-th element of [`units`](Self::units), for random access.
    pub fn unit_at(&self, len: usize, idx: u64) -> Vec<u8> {
        let q = self.q();
        let tail_count = q.pow(len.saturating_sub(1) as u32);
        let mut rest = idx % tail_count;
        let mut principal = self.one(len);
        for x in principal.iter_mut().skip(1) {
            *x = (rest % q) as u8;
            rest /= q;
        }
        self.scale(self.fq.exp((idx / tail_count) as i64), &principal)
    }

    /// All units of `R_len`, as Teichmüller representatives times principal units.
    pub fn units(&self, len: usize) -> Units<'_> {
        Units { field: self, len, teich: 0, tail: vec![0u8; len.saturating_sub(1)], done: len == 0 }
    }
}

pub struct Units<'a> {
    field: &'a TruncatedField,
    len: usize,
    teich: i64,
    tail: Vec<u8>,
    done: bool,
}

impl Iterator for Units<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let k = self.field.fq();
        let zeta = k.exp(self.teich);
        let mut principal = vec![1u8];
        principal.extend_from_slice(&self.tail);
        let out = self.field.scale(zeta, &principal);
        debug_assert_eq!(out.len(), self.len);
        let q = k.q as u8;
        let mut i = 0;
        loop {
            if i == self.tail.len() {
                self.teich += 1;
                if self.teich == k.q as i64 - 1 {
                    self.done = true;
                }
                break;
            }
            self.tail[i] += 1;
            if self.tail[i] < q {
                break;
            }
            self.tail[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn unit_group_order_by_enumeration() {
        for (p, f) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            for m in 1..=4usize {
                let r = TruncatedField::new(p, f, m).unwrap();
                let all: HashSet<Vec<u8>> = r.units(m).collect();
                assert_eq!(all.len() as u64, r.unit_count(m));
                assert_eq!(all.len() as u64, (r.q() - 1) * r.q().pow(m as u32 - 1));
                for (i, u) in r.units(m).enumerate() {
                    assert_eq!(r.unit_at(m, i as u64), u);
                }
            }
        }
    }

    #[test]
    fn t_is_nilpotent_of_exact_index() {
        let r = TruncatedField::new(3, 1, 4).unwrap();
        let t = vec![0, 1, 0, 0];
        assert_ne!(r.pow(&t, 3), vec![0; 4]);
        assert_eq!(r.pow(&t, 4), vec![0; 4]);
    }

    #[test]
    fn inverses_and_associativity() {
        let r = TruncatedField::new(2, 2, 3).unwrap();
        let units: Vec<_> = r.units(3).collect();
        for a in units.iter().step_by(3) {
            let b = r.inv(a).unwrap();
            assert_eq!(r.mul(a, &b), r.one(3));
            for c in units.iter().step_by(7) {
                for d in units.iter().step_by(11) {
                    assert_eq!(r.mul(&r.mul(a, c), d), r.mul(a, &r.mul(c, d)));
                }
            }
        }
        assert!(r.inv(&[0, 1, 0]).is_none());
    }
}
