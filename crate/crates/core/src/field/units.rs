use super::ring::TruncatedField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// The Conway root, generating the Teichmüller copy of `F_q^x`.
    Teichmuller,
    /// `1 + x^j t^i` with `p` not dividing `i`.
    Principal { i: usize, j: u32 },
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub kind: GenKind,
    pub order: u64,
    pub element: Vec<u8>,
}

/// Generators of `(R_a)^x` with a discrete-log solver.
///
/// The principal units `1 + t R_a` are a product of cyclic groups generated by
/// `1 + x^j t^i` (`p ∤ i`, `j < f`), of order `p^e(i)` where `e(i)` is least
/// with `i p^e(i) >= a`.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    field: TruncatedField,
    level: usize,
    gens: Vec<Generator>,
}

impl UnitGroup {
    pub fn new(field: &TruncatedField, level: usize) -> UnitGroup {
        let p = field.p() as usize;
        let k = field.fq();
        let mut gens = Vec::new();
        if level >= 1 {
            let mut e0 = vec![0u8; level];
            e0[0] = k.exp(1);
            gens.push(Generator { kind: GenKind::Teichmuller, order: field.q() - 1, element: e0 });
        }
        for i in (1..level).filter(|i| i % p != 0) {
            let mut e = 0u32;
            while i * p.pow(e) < level {
                e += 1;
            }
            for j in 0..field.f() {
                let mut el = field.one(level);
                el[i] = k.basis(j);
                gens.push(Generator { kind: GenKind::Principal { i, j }, order: (p as u64).pow(e), element: el });
            }
        }
        UnitGroup { field: field.clone(), level, gens }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn order(&self) -> u64 {
        self.gens.iter().map(|g| g.order).product()
    }

    /// Exponents `e` with `u = prod g_k^e_k` in `(R_a)^x`; reads `u[..a]`.
    pub fn dlog(&self, u: &[u8]) -> Vec<u64> {
        let a = self.level;
        let mut exps = vec![0u64; self.gens.len()];
        if a == 0 {
            return exps;
        }
        assert!(u.len() >= a && u[0] != 0, "dlog of a non-unit");
        let r = &self.field;
        let k = r.fq();
        let p = r.p() as usize;
        exps[0] = k.log(u[0]) as u64;
        let mut w = r.scale(k.inv(u[0]), &u[..a]);
        for j in 1..a {
            let c = w[j];
            if c == 0 {
                continue;
            }
            let mut i = j;
            let mut pk = 0u32;
            while i % p == 0 {
                i /= p;
                pk += 1;
            }
            let coords = k.coords_twisted(c, pk);
            let mut h = r.one(a);
            for (l, &al) in coords.iter().enumerate() {
                if al == 0 {
                    continue;
                }
                let idx = self.index_of(i, l as u32);
                let step = (p as u64).pow(pk) * al;
                exps[idx] = (exps[idx] + step) % self.gens[idx].order;
                let mut beta = k.basis(l as u32);
                for _ in 0..pk {
                    beta = k.frobenius(beta);
                }
                let mut g = r.one(a);
                g[j] = beta;
                h = r.mul(&h, &r.pow(&g, al));
            }
            w = r.mul(&w, &r.inv(&h).expect("principal unit"));
            debug_assert_eq!(w[j], 0);
        }
        debug_assert!(w.iter().skip(1).all(|&x| x == 0));
        exps
    }

    fn index_of(&self, i: usize, j: u32) -> usize {
        self.gens
            .iter()
            .position(|g| g.kind == GenKind::Principal { i, j })
            .expect("generator index")
    }

    /// `prod g_k^e_k`.
    pub fn element(&self, exps: &[u64]) -> Vec<u8> {
        let r = &self.field;
        self.gens
            .iter()
            .zip(exps)
            .fold(r.one(self.level), |acc, (g, &e)| r.mul(&acc, &r.pow(&g.element, e % g.order)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn generated_order_matches_unit_count() {
        for (p, f) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (5, 1), (2, 3)] {
            for a in 0..=5usize {
                let r = TruncatedField::new(p, f, a.max(1)).unwrap();
                let g = UnitGroup::new(&r, a);
                assert_eq!(g.order(), r.unit_count(a), "{p}^{f} a={a}");
            }
        }
    }

    #[test]
    fn dlog_round_trips_against_enumeration() {
        for (p, f, a) in [(2u64, 1u32, 4usize), (2, 2, 3), (3, 1, 4), (5, 1, 3), (3, 2, 2), (2, 1, 6)] {
            let r = TruncatedField::new(p, f, a).unwrap();
            let g = UnitGroup::new(&r, a);
            let mut table: HashMap<Vec<u8>, Vec<u64>> = HashMap::new();
            let orders: Vec<u64> = g.generators().iter().map(|x| x.order).collect();
            let mut exps = vec![0u64; orders.len()];
            loop {
                let el = g.element(&exps);
                assert!(table.insert(el, exps.clone()).is_none(), "generators not independent");
                let mut i = 0;
                while i < exps.len() {
                    exps[i] += 1;
                    if exps[i] < orders[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == exps.len() {
                    break;
                }
            }
            assert_eq!(table.len() as u64, r.unit_count(a));
            for u in r.units(a) {
                assert_eq!(g.dlog(&u), table[&u], "{p}^{f} a={a} u={u:?}");
            }
        }
    }
}
