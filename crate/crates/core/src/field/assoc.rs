use super::chars::{AddChar, MultChar};
use super::ring::TruncatedField;
use crate::error::{bail, Result};

/// Witness that two fields are `l`-close, with characters carried across.
///
/// On canonical models with equal `(p, f)` the ring isomorphism
/// `R_l -> R'_l` is the identity on coefficient vectors, so transporting a
/// character keeps its conductor and generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociationCertificate {
    pub source: TruncatedField,
    pub target: TruncatedField,
    pub level: usize,
    pub chars: Vec<(MultChar, MultChar)>,
    pub add_chars: Vec<(AddChar, AddChar)>,
}

impl AssociationCertificate {
    /// Carry one more character across; the depth gate applies.
    pub fn transport(&self, chi: &MultChar) -> Result<MultChar> {
        if chi.field() != &self.source {
            bail!(Association, "local-field", "character lives on {:?}, certificate source is {:?}", chi.field(), self.source);
        }
        depth_gate(chi, self.level)?;
        chi.transport(&self.target)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

fn depth_gate(chi: &MultChar, l: usize) -> Result<()> {
    if l < 2 || chi.depth() >= l - 1 || chi.conductor() >= l {
        bail!(
            Association,
            "local-field",
            "character of conductor {} (depth {}) is too deep for association level {l}",
            chi.conductor(),
            chi.depth()
        );
    }
    Ok(())
}

/// `(n^2 m + n^2, n^2 m + n^2 + 4)`: the conductor bound for depth-`m`
/// representations of `GL_n` and the matching closeness level.
pub fn depth_and_bounds(n: u64, m: u64) -> (u64, u64) {
    let b = n * n * m + n * n;
    (b, b + 4)
}

/// Build the level-`l` association between `a` and `b`.
///
/// Additive pairs `(psi, psi')` must have equal conductors `k` and agree on
/// `p^(k-l)/p^k`, which for scale units `u, u'` means `u = u' mod t^l`.
pub fn associate(
    a: &TruncatedField,
    b: &TruncatedField,
    l: usize,
    chars: &[MultChar],
    add_pairs: &[(AddChar, AddChar)],
) -> Result<AssociationCertificate> {
    if !a.same_residue(b) {
        bail!(Association, "local-field", "residue fields differ: {a:?} vs {b:?}");
    }
    if a.level() < l || b.level() < l {
        bail!(Association, "local-field", "fields {a:?} and {b:?} are not {l}-close as given");
    }
    let mut pairs = Vec::with_capacity(chars.len());
    for chi in chars {
        if chi.field() != a {
            bail!(Association, "local-field", "character lives on {:?}, not {a:?}", chi.field());
        }
        depth_gate(chi, l)?;
        pairs.push((chi.clone(), chi.transport(b)?));
    }
    for (psi, psi2) in add_pairs {
        if psi.field() != a || psi2.field() != b {
            bail!(Association, "local-field", "additive pair is not on the associated fields");
        }
        if psi.conductor() != psi2.conductor() {
            bail!(
                Association,
                "local-field",
                "additive conductors differ: {} vs {}",
                psi.conductor(),
                psi2.conductor()
            );
        }
        if psi.scale()[..l] != psi2.scale()[..l] {
            bail!(
                Association,
                "local-field",
                "additive characters disagree on p^{}/p^{}",
                psi.conductor() - l as i64,
                psi.conductor()
            );
        }
    }
    Ok(AssociationCertificate {
        source: a.clone(),
        target: b.clone(),
        level: l,
        chars: pairs,
        add_chars: add_pairs.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QPower;
    use crate::field::chars::{characters_up_to, turn};
    use crate::field::tracker::Tracker;

    #[test]
    fn bounds_table() {
        assert_eq!(depth_and_bounds(2, 1), (8, 12));
        assert_eq!(depth_and_bounds(1, 0), (1, 5));
        assert_eq!(depth_and_bounds(3, 2), (27, 31));
    }

    #[test]
    fn identity_certificate() {
        let r = TruncatedField::new(3, 1, 4).unwrap();
        let chi = characters_up_to(&r, 3, turn(1, 2), QPower::zero()).pop().unwrap();
        let cert = associate(&r, &r, 4, &[chi.clone()], &[]).unwrap();
        assert!(cert.is_identity());
        assert_eq!(cert.chars[0].0, cert.chars[0].1);
    }

    #[test]
    fn depth_gate_at_levels_five_and_seven() {
        let a = TruncatedField::new(2, 1, 5).unwrap();
        let b = TruncatedField::new(2, 1, 7).unwrap();
        let deep = |c: usize| {
            characters_up_to(&a, c, turn(0, 1), QPower::zero())
                .into_iter()
                .find(|x| x.conductor() == c)
                .unwrap()
        };
        let cert = associate(&a, &b, 5, &[deep(4)], &[]).unwrap();
        assert_eq!(cert.chars[0].1.field(), &b);
        let err = associate(&a, &b, 5, &[deep(5)], &[]).unwrap_err();
        assert_eq!(err.kind, crate::ErrorKind::Association);
    }

    #[test]
    fn residue_mismatch() {
        let a = TruncatedField::new(2, 1, 5).unwrap();
        let b = TruncatedField::new(2, 2, 5).unwrap();
        assert!(associate(&a, &b, 5, &[], &[]).is_err());
    }

    #[test]
    fn additive_window() {
        let a = TruncatedField::new(3, 1, 5).unwrap();
        let b = TruncatedField::new(3, 1, 7).unwrap();
        let psi = AddChar::canonical(&a);
        let psi2 = AddChar::canonical(&b);
        associate(&a, &b, 5, &[], &[(psi.clone(), psi2.clone())]).unwrap();
        let mut s = b.one(7);
        s[6] = 1;
        let close = AddChar::new(&b, 0, s.clone()).unwrap();
        associate(&a, &b, 5, &[], &[(psi.clone(), close.clone())]).unwrap();
        s[2] = 1;
        let far = AddChar::new(&b, 0, s).unwrap();
        assert!(associate(&a, &b, 5, &[], &[(psi.clone(), far)]).is_err());
        assert!(associate(&a, &b, 5, &[], &[(psi, AddChar::with_conductor(&b, 1))]).is_err());
        let tr = Tracker::new();
        for k in -5i64..0 {
            for w in a.units(5).step_by(17) {
                let mut w2 = w.clone();
                w2.extend([0, 0]);
                assert_eq!(
                    AddChar::canonical(&a).eval(k, &w, &tr).unwrap(),
                    close.eval(k, &w2, &tr).unwrap()
                );
            }
        }
    }

    #[test]
    fn transport_is_functorial() {
        let a = TruncatedField::new(5, 1, 3).unwrap();
        let b = TruncatedField::new(5, 1, 6).unwrap();
        let all = characters_up_to(&a, 2, turn(1, 3), QPower::zero());
        let cert = associate(&a, &b, 3, &all, &[]).unwrap();
        for x in all.iter().step_by(3) {
            for y in all.iter().step_by(4) {
                let lhs = cert.transport(&x.mul(y).unwrap()).unwrap();
                let rhs = cert.transport(x).unwrap().mul(&cert.transport(y).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
