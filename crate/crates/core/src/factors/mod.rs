//! Twisted symmetric and exterior square factors for the Siegel Levi.
//!
//! Parameters are principal series of `GL_n` (lists of characters) or
//! Langlands quotients built from unitary principal-series blocks with real
//! twists `s_1 > ... > s_d`. Every factor is assembled from Tate factors by
//! multiplicativity.

mod gamma;
mod plancherel;
mod psi;
mod stability;

pub use gamma::{
    local_factors, rs_gamma, rs_local_factors, spherical_l, tempered_l, twisted_gamma, TwistedFactors,
};
pub use plancherel::{plancherel, plancherel_decomposition, rs_plancherel, PlancherelTerm};
pub use psi::{psi_dependence, psi_ratio};
pub use stability::{find_c, stability_check, stability_scan, ScanRow, StabilityReport};

use num_rational::Ratio;
use num_traits::Zero;

use crate::arith::Lattice;
use crate::error::{bail, Result};
use crate::field::{AddChar, MultChar, TruncatedField};
use crate::root::Parity;

/// The representation `r_0` of `GL_n(C)`: `Sym^2` for `GSpin_{2n+1}`, `Wedge^2` for `GSpin_{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum R0 {
    Sym2,
    Wedge2,
}

impl R0 {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            R0::Sym2 => n * (n + 1) / 2,
            R0::Wedge2 => n * (n - 1) / 2,
        }
    }

    /// The exponent `n ± 1` of the central character in `det(r_0 ∘ sigma)`.
    pub fn central_exponent(&self, n: usize) -> i64 {
        match self {
            R0::Sym2 => n as i64 + 1,
            R0::Wedge2 => n as i64 - 1,
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            R0::Sym2 => Parity::Odd,
            R0::Wedge2 => Parity::Even,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            R0::Sym2 => "sym2",
            R0::Wedge2 => "wedge2",
        }
    }

    /// Index pairs `(i, j)` of the constituents `chi_i chi_j`.
    pub fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..n {
            let start = if *self == R0::Sym2 { i } else { i + 1 };
            for j in start..n {
                out.push((i, j));
            }
        }
        out
    }
}

impl std::str::FromStr for R0 {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<R0> {
        match s {
            "sym2" => Ok(R0::Sym2),
            "wedge2" => Ok(R0::Wedge2),
            _ => bail!(Usage, "ls-factors", "r0 must be `sym2` or `wedge2`, got `{s}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalSeries {
    chars: Vec<MultChar>,
}

impl PrincipalSeries {
    pub fn new(chars: Vec<MultChar>) -> Result<PrincipalSeries> {
        let Some(first) = chars.first() else {
            bail!(Usage, "ls-factors", "principal series needs at least one character");
        };
        if chars.iter().any(|c| c.field() != first.field()) {
            bail!(Usage, "ls-factors", "principal-series characters live on different fields");
        }
        Ok(PrincipalSeries { chars })
    }

    pub fn chars(&self) -> &[MultChar] {
        &self.chars
    }

    pub fn n(&self) -> usize {
        self.chars.len()
    }

    pub fn field(&self) -> &TruncatedField {
        self.chars[0].field()
    }

    pub fn q(&self) -> u64 {
        self.field().q()
    }

    pub fn central(&self) -> MultChar {
        self.chars[1..]
            .iter()
            .fold(self.chars[0].clone(), |acc, c| acc.mul(c).expect("same field"))
    }

    pub fn dual(&self) -> PrincipalSeries {
        PrincipalSeries { chars: self.chars.iter().map(MultChar::inv).collect() }
    }

    /// `pi ⊗ |det|^s0`.
    pub fn twist(&self, s0: Ratio<i64>) -> PrincipalSeries {
        PrincipalSeries { chars: self.chars.iter().map(|c| c.twist(s0)).collect() }
    }

    /// `pi ⊗ (eta ∘ det)`: every character multiplied by `eta`.
    pub fn times(&self, eta: &MultChar) -> Result<PrincipalSeries> {
        Ok(PrincipalSeries { chars: self.chars.iter().map(|c| c.mul(eta)).collect::<Result<_>>()? })
    }

    pub fn is_unitary(&self) -> bool {
        self.chars.iter().all(MultChar::is_unitary)
    }

    pub fn is_unramified(&self) -> bool {
        self.chars.iter().all(MultChar::is_unramified)
    }

    pub fn max_conductor(&self) -> usize {
        self.chars.iter().map(MultChar::conductor).max().unwrap_or(0)
    }

    /// Consecutive blocks of the given sizes.
    pub fn split(&self, partition: &[usize]) -> Result<Vec<PrincipalSeries>> {
        if partition.contains(&0) || partition.iter().sum::<usize>() != self.n() {
            bail!(Usage, "ls-factors", "{partition:?} is not a partition of {}", self.n());
        }
        let mut out = Vec::new();
        let mut start = 0;
        for &k in partition {
            out.push(PrincipalSeries { chars: self.chars[start..start + k].to_vec() });
            start += k;
        }
        Ok(out)
    }
}

/// `J(P_1 |det|^s_1, ..., P_d |det|^s_d)` with unitary `P_i` and `s_1 > ... > s_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanglandsQuotient {
    blocks: Vec<(PrincipalSeries, Ratio<i64>)>,
}

impl LanglandsQuotient {
    pub fn new(blocks: Vec<(PrincipalSeries, Ratio<i64>)>) -> Result<LanglandsQuotient> {
        if blocks.is_empty() {
            bail!(Usage, "ls-factors", "Langlands quotient needs at least one block");
        }
        let field = blocks[0].0.field().clone();
        for (i, (p, s)) in blocks.iter().enumerate() {
            if p.field() != &field {
                bail!(Usage, "ls-factors", "block {} lives on a different field", i + 1);
            }
            if !p.is_unitary() {
                bail!(Usage, "ls-factors", "block {} is not unitary; fold real twists into s", i + 1);
            }
            if i > 0 && blocks[i - 1].1 <= *s {
                bail!(Usage, "ls-factors", "exponents must decrease strictly: s_{} = {} <= s_{} = {s}", i, blocks[i - 1].1, i + 1);
            }
        }
        Ok(LanglandsQuotient { blocks })
    }

    pub fn blocks(&self) -> &[(PrincipalSeries, Ratio<i64>)] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|(p, _)| p.n()).sum()
    }

    /// The principal series with the twists folded into the characters.
    pub fn flatten(&self) -> PrincipalSeries {
        PrincipalSeries {
            chars: self.blocks.iter().flat_map(|(p, s)| p.twist(*s).chars).collect(),
        }
    }

    /// Contragredient: blocks `(P_i^v, -s_i)` in reverse order.
    pub fn dual(&self) -> LanglandsQuotient {
        LanglandsQuotient { blocks: self.blocks.iter().rev().map(|(p, s)| (p.dual(), -s)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Principal(PrincipalSeries),
    Quotient(LanglandsQuotient),
}

impl Param {
    pub fn n(&self) -> usize {
        match self {
            Param::Principal(p) => p.n(),
            Param::Quotient(l) => l.n(),
        }
    }

    pub fn field(&self) -> &TruncatedField {
        match self {
            Param::Principal(p) => p.field(),
            Param::Quotient(l) => l.blocks[0].0.field(),
        }
    }

    pub fn flatten(&self) -> PrincipalSeries {
        match self {
            Param::Principal(p) => p.clone(),
            Param::Quotient(l) => l.flatten(),
        }
    }

    pub fn dual(&self) -> Param {
        match self {
            Param::Principal(p) => Param::Principal(p.dual()),
            Param::Quotient(l) => Param::Quotient(l.dual()),
        }
    }

    /// Unitary principal series, or a quotient with one block at `s = 0`.
    pub fn is_tempered(&self) -> bool {
        match self {
            Param::Principal(p) => p.is_unitary(),
            Param::Quotient(l) => l.blocks.len() == 1 && l.blocks[0].1.is_zero(),
        }
    }
}

/// Everything needed for `gamma(s, pi, r_0 ⊠ eta, psi)`.
#[derive(Clone, Debug)]
pub struct Request {
    pub param: Param,
    pub r0: R0,
    pub eta: MultChar,
    pub psi: AddChar,
    pub lattice: Lattice,
}

impl Request {
    pub fn new(param: Param, r0: R0, eta: MultChar, psi: AddChar) -> Result<Request> {
        let field = param.field();
        if eta.field() != field || psi.field() != field {
            bail!(Usage, "ls-factors", "parameter, eta and psi must live on one field");
        }
        Ok(Request { param, r0, eta, psi, lattice: Lattice::default() })
    }

    pub fn principal(chars: Vec<MultChar>, r0: R0, eta: MultChar, psi: AddChar) -> Result<Request> {
        Request::new(Param::Principal(PrincipalSeries::new(chars)?), r0, eta, psi)
    }

    pub fn q(&self) -> u64 {
        self.param.field().q()
    }

    pub fn n(&self) -> usize {
        self.param.n()
    }

    /// `(pi^v, r_0, eta^-1, psi^-1)`.
    pub fn dual(&self) -> Request {
        Request {
            param: self.param.dual(),
            r0: self.r0,
            eta: self.eta.inv(),
            psi: self.psi.conj(),
            lattice: self.lattice,
        }
    }

    pub fn with_psi(&self, psi: AddChar) -> Request {
        Request { psi, ..self.clone() }
    }

    pub fn with_param(&self, param: Param) -> Request {
        Request { param, ..self.clone() }
    }
}
