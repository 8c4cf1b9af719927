use super::{rs_gamma, twisted_gamma, Param, PrincipalSeries, Request};
use crate::arith::FactoredRF;
use crate::error::Result;
use crate::field::{AddChar, Tracker};
use crate::root::{FactorLabel, GSpinRootDatum};

/// Normalized Plancherel density `gamma(s, pi, r_0 ⊠ eta, psi) · gamma(-s, pi^v, r_0 ⊠ eta^-1, psi^-1)`.
///
/// The constant `gamma_{w_0}(G/P)^2` is not part of the result.
pub fn plancherel(req: &Request, tr: &Tracker) -> Result<FactoredRF> {
    Ok(twisted_gamma(req, tr)?.mul(&twisted_gamma(&req.dual(), tr)?.negate()))
}

/// `gamma(s, P × P', psi) · gamma(-s, P^v × P'^v, psi^-1)`.
pub fn rs_plancherel(p: &PrincipalSeries, p2: &PrincipalSeries, psi: &AddChar, tr: &Tracker) -> Result<FactoredRF> {
    Ok(rs_gamma(p, p2, psi, tr)?.mul(&rs_gamma(&p.dual(), &p2.dual(), &psi.conj(), tr)?.negate()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlancherelTerm {
    pub label: FactorLabel,
    pub mu: FactoredRF,
}

fn labels(d: usize) -> Vec<FactorLabel> {
    let mut out = Vec::new();
    for i in (1..=d).rev() {
        out.push(FactorLabel::Block(i));
        for j in (1..i).rev() {
            out.push(FactorLabel::Pair(i, j));
        }
    }
    out
}

/// The density as a product over the factors of `w_0` for the given partition:
/// a block density for each block and a Rankin-Selberg density
/// `mu'(P_i × P_j eta)` for each pair `j < i`.
pub fn plancherel_decomposition(
    req: &Request,
    partition: &[usize],
    tr: &Tracker,
) -> Result<(Vec<PlancherelTerm>, FactoredRF)> {
    let p = req.param.flatten();
    let blocks = p.split(partition)?;
    let order = match GSpinRootDatum::new(p.n(), req.r0.parity()) {
        Ok(datum) => datum
            .langlands_decomposition(partition)?
            .factors
            .into_iter()
            .map(|f| f.label)
            .collect(),
        Err(_) => labels(blocks.len()),
    };
    let mut terms = Vec::new();
    let mut total = FactoredRF::one(req.q());
    for label in order {
        let mu = match label {
            FactorLabel::Block(i) => plancherel(&req.with_param(Param::Principal(blocks[i - 1].clone())), tr)?,
            FactorLabel::Pair(i, j) => rs_plancherel(&blocks[i - 1], &blocks[j - 1].times(&req.eta)?, &req.psi, tr)?,
        };
        total = total.mul(&mu);
        terms.push(PlancherelTerm { label, mu });
    }
    Ok((terms, total))
}
