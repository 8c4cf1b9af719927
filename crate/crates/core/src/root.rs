//! Root datum of `GSpin_{2n+1}` / `GSpin_{2n}`, Weyl group combinatorics and
//! the Siegel Levi.
//!
//! Characters live in `X = Z e_0 + ... + Z e_n` (index 0 is `e_0`), cocharacters
//! in the dual lattice with the standard pairing. Weyl elements are integer
//! matrices acting on `X`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{bail, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `GSpin_{2n+1}`, type `B_n`.
    Odd,
    /// `GSpin_{2n}`, type `D_n`.
    Even,
}

impl Parity {
    pub fn group_name(&self, n: usize) -> String {
        match self {
            Parity::Odd => format!("GSpin_{}", 2 * n + 1),
            Parity::Even => format!("GSpin_{}", 2 * n),
        }
    }

    pub fn cartan_type(&self, n: usize) -> String {
        match self {
            Parity::Odd => format!("B{n}"),
            Parity::Even => format!("D{n}"),
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Parity> {
        match s {
            "odd" | "B" => Ok(Parity::Odd),
            "even" | "D" => Ok(Parity::Even),
            _ => bail!(Usage, "gspin-root", "parity must be `odd` or `even`, got `{s}`"),
        }
    }
}

pub type Vector = Vec<i64>;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    dim: usize,
    data: Vec<i64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Mat {
    pub fn identity(dim: usize) -> Mat {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        Mat { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.dim;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        Mat { dim: n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vector {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let n = self.dim;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Mat { dim: n, data }
    }
}

pub fn pair(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// A Weyl group element with a reduced word `s_{w[0]} s_{w[1]} ...` (simple
/// reflections indexed from 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElt {
    pub matrix: Mat,
    pub word: Vec<usize>,
}

impl WeylElt {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vector {
        self.matrix.apply(v)
    }
}

#[derive(Clone, Debug)]
pub struct GSpinRootDatum {
    n: usize,
    parity: Parity,
    simple: Vec<Vector>,
    coroots: Vec<Vector>,
    reflections: Vec<Mat>,
    roots: Vec<Vector>,
    weights: Vector,
}

impl GSpinRootDatum {
    pub fn new(n: usize, parity: Parity) -> Result<GSpinRootDatum> {
        if n == 0 || (parity == Parity::Even && n < 2) {
            bail!(Usage, "gspin-root", "no {} root datum for n = {n}", parity.cartan_type(n));
        }
        let dim = n + 1;
        let e = |i: usize| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        };
        let mut simple = Vec::new();
        let mut coroots = Vec::new();
        for k in 1..n {
            let mut a = e(k);
            a[k + 1] = -1;
            simple.push(a.clone());
            coroots.push(a);
        }
        match parity {
            Parity::Odd => {
                simple.push(e(n));
                let mut c = vec![0; dim];
                c[n] = 2;
                c[0] = -1;
                coroots.push(c);
            }
            Parity::Even => {
                let mut a = e(n - 1);
                a[n] = 1;
                simple.push(a);
                let mut c = e(n - 1);
                c[n] = 1;
                c[0] = -1;
                coroots.push(c);
            }
        }
        let reflections: Vec<Mat> = simple
            .iter()
            .zip(&coroots)
            .map(|(a, c)| {
                // s(x) = x - <x, c> a, column j is the image of e_j.
                let mut data = vec![0; dim * dim];
                for j in 0..dim {
                    for i in 0..dim {
                        data[i * dim + j] = (i == j) as i64 - c[j] * a[i];
                    }
                }
                Mat { dim, data }
            })
            .collect();
        let mut seen: BTreeSet<Vector> = simple.iter().cloned().collect();
        let mut frontier: Vec<Vector> = simple.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in &frontier {
                for s in &reflections {
                    let t = s.apply(r);
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        let mut weights = vec![0; dim];
        for (i, w) in weights.iter_mut().enumerate().skip(1) {
            *w = 2 * (n - i) as i64 + 1;
        }
        let datum = GSpinRootDatum { n, parity, simple, coroots, reflections, roots: seen.into_iter().collect(), weights };
        for i in 0..n {
            if pair(&datum.simple[i], &datum.coroots[i]) != 2 {
                bail!(Consistency, "gspin-root", "<alpha_{i}, alpha_{i}^v> != 2");
            }
        }
        Ok(datum)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple
    }

    pub fn simple_coroots(&self) -> &[Vector] {
        &self.coroots
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn reflection(&self, i: usize) -> &Mat {
        &self.reflections[i]
    }

    /// Entry `(i, j)` is `<alpha_i, alpha_j^v>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        self.simple
            .iter()
            .map(|a| self.coroots.iter().map(|c| pair(a, c)).collect())
            .collect()
    }

    pub fn is_positive(&self, r: &[i64]) -> bool {
        pair(r, &self.weights) > 0
    }

    pub fn positive_roots(&self) -> Vec<Vector> {
        self.roots.iter().filter(|r| self.is_positive(r)).cloned().collect()
    }

    /// Indices of `theta = Delta minus {alpha_n}`.
    pub fn theta(&self) -> Vec<usize> {
        (0..self.n - 1).collect()
    }

    /// `|W|` from the type: `2^n n!` for `B_n`, `2^(n-1) n!` for `D_n`.
    pub fn weyl_order(&self) -> u64 {
        let fact: u64 = (1..=self.n as u64).product();
        match self.parity {
            Parity::Odd => fact << self.n,
            Parity::Even => fact << (self.n - 1),
        }
    }

    /// Positive roots sent to negative roots.
    pub fn inversions(&self, m: &Mat) -> BTreeSet<Vector> {
        self.roots
            .iter()
            .filter(|r| self.is_positive(r) && !self.is_positive(&m.apply(r)))
            .cloned()
            .collect()
    }

    pub fn element(&self, word: &[usize]) -> Mat {
        word.iter().fold(Mat::identity(self.dim()), |m, &i| m.mul(&self.reflections[i]))
    }

    /// Reduced word by repeatedly stripping the leftmost right descent.
    pub fn reduce(&self, m: &Mat) -> WeylElt {
        let mut w = m.clone();
        let mut rev = Vec::new();
        'outer: loop {
            for (i, a) in self.simple.iter().enumerate() {
                if !self.is_positive(&w.apply(a)) {
                    w = w.mul(&self.reflections[i]);
                    rev.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        assert_eq!(w, Mat::identity(self.dim()), "matrix is not in the Weyl group");
        rev.reverse();
        WeylElt { matrix: m.clone(), word: rev }
    }

    /// Longest element of the parabolic subgroup generated by `idx`.
    pub fn longest(&self, idx: &[usize]) -> WeylElt {
        let mut w = Mat::identity(self.dim());
        'outer: loop {
            for &i in idx {
                if self.is_positive(&w.apply(&self.simple[i])) {
                    w = w.mul(&self.reflections[i]);
                    continue 'outer;
                }
            }
            break;
        }
        self.reduce(&w)
    }

    /// `w_0 = w_{l,Delta} w_{l,theta}`.
    pub fn siegel_w0(&self) -> WeylElt {
        let all: Vec<usize> = (0..self.n).collect();
        let m = self.longest(&all).matrix.mul(&self.longest(&self.theta()).matrix);
        self.reduce(&m)
    }

    /// `w_0(theta)` as a set of roots.
    pub fn w0_theta_image(&self) -> BTreeSet<Vector> {
        let w0 = self.siegel_w0();
        self.theta().iter().map(|&i| w0.apply(&self.simple[i])).collect()
    }

    /// Whether `w_0` permutes `theta`.
    pub fn is_self_associate(&self) -> bool {
        let th: BTreeSet<Vector> = self.theta().iter().map(|&i| self.simple[i].clone()).collect();
        self.w0_theta_image() == th
    }

    /// `(dim r_0, measure exponent)`, both `n(n+1)/2` (odd) or `n(n-1)/2` (even).
    pub fn adjoint_data(&self) -> (usize, usize) {
        let n = self.n;
        let d = match self.parity {
            Parity::Odd => n * (n + 1) / 2,
            Parity::Even => n * (n - 1) / 2,
        };
        (d, d)
    }

    /// The element whose inversion set is `set`, if there is one.
    pub fn from_inversions(&self, set: &BTreeSet<Vector>) -> Option<WeylElt> {
        let mut s = set.clone();
        let mut word = Vec::new();
        while !s.is_empty() {
            let i = self.simple.iter().position(|a| s.contains(a))?;
            word.push(i);
            let a = &self.simple[i];
            s = s.iter().filter(|r| *r != a).map(|r| self.reflections[i].apply(r)).collect();
        }
        let m = word
            .iter()
            .fold(Mat::identity(self.dim()), |m, &i| self.reflections[i].mul(&m));
        let elt = self.reduce(&m);
        (self.inversions(&elt.matrix) == *set).then_some(elt)
    }

    pub fn langlands_decomposition(&self, partition: &[usize]) -> Result<BlockDecomposition> {
        if partition.is_empty() || partition.contains(&0) || partition.iter().sum::<usize>() != self.n {
            bail!(Usage, "gspin-root", "{partition:?} is not a partition of {}", self.n);
        }
        let mut blocks = Vec::new();
        let mut c = 1;
        for &k in partition {
            blocks.push((c..c + k).collect::<Vec<usize>>());
            c += k;
        }
        let dim = self.dim();
        let sum_root = |a: usize, b: usize| {
            let mut v = vec![0; dim];
            v[a] += 1;
            v[b] += 1;
            v
        };
        let block_roots = |i: usize| {
            let mut out = BTreeSet::new();
            for &a in &blocks[i] {
                for &b in &blocks[i] {
                    if a < b {
                        out.insert(sum_root(a, b));
                    } else if a == b && self.parity == Parity::Odd {
                        let mut v = vec![0; dim];
                        v[a] = 1;
                        out.insert(v);
                    }
                }
            }
            out
        };
        let pair_roots = |i: usize, j: usize| {
            let mut out = BTreeSet::new();
            for &a in &blocks[i] {
                for &b in &blocks[j] {
                    out.insert(sum_root(a, b));
                }
            }
            out
        };
        let d = partition.len();
        let mut order = Vec::new();
        for i in (0..d).rev() {
            order.push((FactorLabel::Block(i + 1), block_roots(i)));
            for j in (0..i).rev() {
                order.push((FactorLabel::Pair(i + 1, j + 1), pair_roots(i, j)));
            }
        }
        let mut x = Mat::identity(dim);
        let mut factors = Vec::new();
        for (label, roots) in order {
            let image: BTreeSet<Vector> = roots.iter().map(|r| x.apply(r)).collect();
            let Some(elt) = self.from_inversions(&image) else {
                bail!(Consistency, "gspin-root", "no Weyl element realizes factor {label}");
            };
            x = elt.matrix.mul(&x);
            factors.push(BlockFactor { label, elt });
        }
        Ok(BlockDecomposition { partition: partition.to_vec(), factors })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorLabel {
    /// Rank block `i` (1-based).
    Block(usize),
    /// Pair `(i, j)` with `j < i`.
    Pair(usize, usize),
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorLabel::Block(i) => write!(f, "rank-block {i}"),
            FactorLabel::Pair(i, j) => write!(f, "pair ({i},{j})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockFactor {
    pub label: FactorLabel,
    pub elt: WeylElt,
}

/// Factors of `w_0` in the order they are applied: the first factor acts first.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub partition: Vec<usize>,
    pub factors: Vec<BlockFactor>,
}

impl BlockDecomposition {
    /// Composite of all factors, last factor leftmost.
    pub fn product(&self) -> Mat {
        let dim = self.factors[0].elt.matrix.dim();
        self.factors.iter().fold(Mat::identity(dim), |x, f| f.elt.matrix.mul(&x))
    }

    pub fn total_length(&self) -> usize {
        self.factors.iter().map(|f| f.elt.length()).sum()
    }
}

/// All partitions (ordered, as compositions) of `n`.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in 1..=n {
        for mut rest in compositions(n - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}
