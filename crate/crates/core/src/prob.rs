//! Finite-alphabet probability containers and information measures.
//!
//! Every table is dense and row-major: the last axis varies fastest. All
//! information quantities are in bits, with `0 log 0 = 0`.

use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on total mass and row sums.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Probabilities below this are treated as exact zeros inside logarithms.
pub const ZERO_CLAMP: f64 = 1e-15;

/// A named finite symbol set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    name: String,
    size: usize,
    labels: Option<Vec<String>>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Alphabet(format!("`{name}` has size 0")));
        }
        Ok(Alphabet {
            name,
            size,
            labels: None,
        })
    }

    pub fn with_labels<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Alphabet(format!("`{name}` has no labels")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Alphabet(format!("`{name}` repeats label `{l}`")));
            }
        }
        Ok(Alphabet {
            name,
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of symbol `i`; falls back to the decimal index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Inverse of [`Alphabet::label`].
    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse::<usize>().ok().filter(|&i| i < self.size),
        }
    }

    /// Same symbols, different name.
    pub fn renamed(&self, name: impl Into<String>) -> Alphabet {
        Alphabet {
            name: name.into(),
            size: self.size,
            labels: self.labels.clone(),
        }
    }

    /// Same name and size, labels dropped.
    pub fn unlabeled(&self) -> Alphabet {
        Alphabet {
            name: self.name.clone(),
            size: self.size,
            labels: None,
        }
    }

    /// Same size (labels ignored).
    pub fn compatible(&self, other: &Alphabet) -> bool {
        self.size == other.size
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.size)
    }
}

fn check_stochastic(what: &str, probs: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for &p in probs {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::NotStochastic(format!("{what}: entry {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::NotStochastic(format!("{what}: sums to {sum}")));
    }
    Ok(())
}

/// A probability vector over one alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.size() {
            return Err(Error::NotStochastic(format!(
                "pmf over {alphabet} given {} entries",
                probs.len()
            )));
        }
        check_stochastic(alphabet.name(), &probs)?;
        Ok(Pmf { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.size();
        Pmf {
            alphabet,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(alphabet: Alphabet, symbol: usize) -> Result<Self> {
        if symbol >= alphabet.size() {
            return Err(Error::Axis(format!("symbol {symbol} not in {alphabet}")));
        }
        let mut probs = vec![0.0; alphabet.size()];
        probs[symbol] = 1.0;
        Ok(Pmf { alphabet, probs })
    }

    /// Bernoulli pmf `(1 - p, p)` over a binary alphabet.
    pub fn bernoulli(alphabet: Alphabet, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
        Pmf::new(alphabet, vec![1.0 - p, p])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// View as a one-axis joint.
    pub fn to_joint(&self) -> JointPmf {
        JointPmf {
            axes: vec![self.alphabet.clone()],
            probs: self.probs.clone(),
        }
    }
}

/// A pmf over the product of several alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Alphabet>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Alphabet>, probs: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Axis("joint pmf needs at least one axis".into()));
        }
        let size: usize = axes.iter().map(Alphabet::size).product();
        if probs.len() != size {
            return Err(Error::NotStochastic(format!(
                "joint table has {} entries, axes need {size}",
                probs.len()
            )));
        }
        check_stochastic("joint pmf", &probs)?;
        Ok(JointPmf { axes, probs })
    }

    /// `p ⊗ q` with p's axes first.
    pub fn product(p: &JointPmf, q: &JointPmf) -> JointPmf {
        let mut probs = Vec::with_capacity(p.probs.len() * q.probs.len());
        for &a in &p.probs {
            for &b in &q.probs {
                probs.push(a * b);
            }
        }
        let mut axes = p.axes.clone();
        axes.extend(q.axes.iter().cloned());
        JointPmf { axes, probs }
    }

    pub fn axes(&self) -> &[Alphabet] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(Alphabet::size).collect()
    }

    pub fn num_axes(&self) -> usize {
        self.axes.len()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.name() == name)
    }

    /// Resolve a list of axis names to indices.
    pub fn axis_indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.axis_index(n)
                    .ok_or_else(|| Error::Axis(format!("no axis named `{n}`")))
            })
            .collect()
    }

    /// Flat index of a symbol tuple.
    pub fn flat_index(&self, symbols: &[usize]) -> usize {
        debug_assert_eq!(symbols.len(), self.axes.len());
        symbols
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (&s, a)| acc * a.size() + s)
    }

    pub fn get(&self, symbols: &[usize]) -> f64 {
        self.probs[self.flat_index(symbols)]
    }

    /// Reorder axes; `order[k]` is the old index of the new k-th axis.
    pub fn permute_axes(&self, order: &[usize]) -> Result<JointPmf> {
        check_subset(order, self.axes.len())?;
        if order.len() != self.axes.len() {
            return Err(Error::Axis("permutation must list every axis".into()));
        }
        self.marginalize(order)
    }

    /// Sum out every axis not in `keep`; the result's axes follow `keep`'s order.
    pub fn marginalize(&self, keep: &[usize]) -> Result<JointPmf> {
        if keep.is_empty() {
            return Err(Error::Axis("empty axis subset".into()));
        }
        check_subset(keep, self.axes.len())?;
        let probs = self.marginal_table(keep);
        Ok(JointPmf {
            axes: keep.iter().map(|&k| self.axes[k].clone()).collect(),
            probs,
        })
    }

    /// Marginal table over `keep` in `keep`'s order.
    fn marginal_table(&self, keep: &[usize]) -> Vec<f64> {
        let n = self.axes.len();
        let mut stride = vec![0usize; n];
        let mut acc = 1;
        for &k in keep.iter().rev() {
            stride[k] = acc;
            acc *= self.axes[k].size();
        }
        let sizes = self.sizes();
        let mut out = vec![0.0; acc];
        let mut digits = vec![0usize; n];
        let mut idx = 0usize;
        for &p in &self.probs {
            out[idx] += p;
            for a in (0..n).rev() {
                digits[a] += 1;
                idx += stride[a];
                if digits[a] < sizes[a] {
                    break;
                }
                idx -= stride[a] * sizes[a];
                digits[a] = 0;
            }
        }
        out
    }

    /// Entropy of the marginal over `axes`; an empty set has entropy 0.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        if axes.is_empty() {
            return Ok(0.0);
        }
        check_subset(axes, self.axes.len())?;
        Ok(table_entropy(&self.marginal_table(axes)))
    }
}

fn check_subset(axes: &[usize], n: usize) -> Result<()> {
    for (i, &a) in axes.iter().enumerate() {
        if a >= n {
            return Err(Error::Axis(format!("axis {a} out of range (joint has {n})")));
        }
        if axes[..i].contains(&a) {
            return Err(Error::Axis(format!("axis {a} listed twice")));
        }
    }
    Ok(())
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p < ZERO_CLAMP {
        0.0
    } else {
        -p * p.log2()
    }
}

fn table_entropy(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| plogp(p)).sum::<f64>().max(0.0)
}

/// Shannon entropy in bits.
pub fn entropy(p: &Pmf) -> f64 {
    table_entropy(&p.probs)
}

/// `h(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(p));
    }
    Ok(plogp(p) + plogp(1.0 - p))
}

/// Free-function form of [`JointPmf::marginalize`].
pub fn marginalize(j: &JointPmf, keep: &[usize]) -> Result<JointPmf> {
    j.marginalize(keep)
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// `I(A;B) = H(A) + H(B) - H(A,B)`.
pub fn mutual_information(j: &JointPmf, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Axis("mutual information needs nonempty groups".into()));
    }
    if !disjoint(a, b) {
        return Err(Error::OverlappingGroups);
    }
    let ab = union(a, b);
    let v = j.entropy_of(a)? + j.entropy_of(b)? - j.entropy_of(&ab)?;
    Ok(v.max(0.0))
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
pub fn conditional_mutual_information(j: &JointPmf, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Axis("mutual information needs nonempty groups".into()));
    }
    if !disjoint(a, b) || !disjoint(a, c) || !disjoint(b, c) {
        return Err(Error::OverlappingGroups);
    }
    let ac = union(a, c);
    let bc = union(b, c);
    let abc = union(&ac, b);
    let v = j.entropy_of(&ac)? + j.entropy_of(&bc)? - j.entropy_of(&abc)? - j.entropy_of(c)?;
    Ok(v.max(0.0))
}

/// Memoized marginal entropies of one joint, keyed by axis bitmask.
///
/// The bound evaluators ask for the same marginals several times per call.
pub(crate) struct Measures<'a> {
    joint: &'a JointPmf,
    cache: Vec<(u32, f64)>,
}

impl<'a> Measures<'a> {
    pub(crate) fn new(joint: &'a JointPmf) -> Self {
        debug_assert!(joint.num_axes() <= 32);
        Measures {
            joint,
            cache: Vec::with_capacity(16),
        }
    }

    pub(crate) fn h(&mut self, mask: u32) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&(_, v)) = self.cache.iter().find(|(m, _)| *m == mask) {
            return v;
        }
        let axes: Vec<usize> = (0..self.joint.num_axes()).filter(|i| mask >> i & 1 == 1).collect();
        let v = table_entropy(&self.joint.marginal_table(&axes));
        self.cache.push((mask, v));
        v
    }

    /// `I(A;B|C)` on bitmasks; may be slightly negative from rounding only.
    pub(crate) fn cmi(&mut self, a: u32, b: u32, c: u32) -> f64 {
        debug_assert!(a & b == 0 && a & c == 0 && b & c == 0);
        let v = self.h(a | c) + self.h(b | c) - self.h(a | b | c) - self.h(c);
        v.max(0.0)
    }

    pub(crate) fn mi(&mut self, a: u32, b: u32) -> f64 {
        self.cmi(a, b, 0)
    }
}

/// A stochastic matrix `p(output | inputs)`; rows ordered lexicographically
/// over the input tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf {
    input_axes: Vec<Alphabet>,
    output_axis: Alphabet,
    probs: Vec<f64>,
}

impl CondPmf {
    pub fn new(input_axes: Vec<Alphabet>, output_axis: Alphabet, probs: Vec<f64>) -> Result<Self> {
        let rows: usize = input_axes.iter().map(Alphabet::size).product();
        let width = output_axis.size();
        if probs.len() != rows * width {
            return Err(Error::NotStochastic(format!(
                "conditional p({}|..) has {} entries, expected {}",
                output_axis.name(),
                probs.len(),
                rows * width
            )));
        }
        for (r, row) in probs.chunks(width).enumerate() {
            check_stochastic(&format!("row {r} of p({}|..)", output_axis.name()), row)?;
        }
        Ok(CondPmf {
            input_axes,
            output_axis,
            probs,
        })
    }

    /// Every row equal to `row`.
    pub fn constant_rows(input_axes: Vec<Alphabet>, output_axis: Alphabet, row: &[f64]) -> Result<Self> {
        let rows: usize = input_axes.iter().map(Alphabet::size).product();
        let probs = row.iter().copied().cycle().take(rows * row.len()).collect();
        CondPmf::new(input_axes, output_axis, probs)
    }

    pub fn uniform(input_axes: Vec<Alphabet>, output_axis: Alphabet) -> Self {
        let w = output_axis.size();
        let row = vec![1.0 / w as f64; w];
        CondPmf::constant_rows(input_axes, output_axis, &row).expect("uniform rows are stochastic")
    }

    pub fn input_axes(&self) -> &[Alphabet] {
        &self.input_axes
    }

    pub fn output_axis(&self) -> &Alphabet {
        &self.output_axis
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_rows(&self) -> usize {
        self.probs.len() / self.output_axis.size()
    }

    pub fn row_index(&self, inputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.input_axes.len());
        inputs
            .iter()
            .zip(&self.input_axes)
            .fold(0, |acc, (&s, a)| acc * a.size() + s)
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.output_axis.size();
        &self.probs[r * w..(r + 1) * w]
    }

    pub fn row_for(&self, inputs: &[usize]) -> &[f64] {
        self.row(self.row_index(inputs))
    }

    pub fn prob(&self, inputs: &[usize], output: usize) -> f64 {
        self.row_for(inputs)[output]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.output_axis.size())
    }

    /// Same table with a different output axis name.
    pub fn with_output_axis(mut self, axis: Alphabet) -> Result<Self> {
        if axis.size() != self.output_axis.size() {
            return Err(Error::Axis(format!("{axis} does not fit {}", self.output_axis)));
        }
        self.output_axis = axis;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bin(name: &str) -> Alphabet {
        Alphabet::new(name, 2).unwrap()
    }

    #[test]
    fn alphabet_rules() {
        assert!(Alphabet::new("x", 0).is_err());
        assert!(Alphabet::with_labels("y", ["0", "1", "0"]).is_err());
        let y = Alphabet::with_labels("y2", ["0", "1", "e"]).unwrap();
        assert_eq!(y.size(), 3);
        assert_eq!(y.index_of("e"), Some(2));
        assert_eq!(y.label(2), "e");
    }

    #[test]
    fn pmf_validation() {
        assert!(Pmf::new(bin("x"), vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(bin("x"), vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(bin("x"), vec![1.0]).is_err());
        assert!(Pmf::new(bin("x"), vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy(&Pmf::uniform(bin("x"))), 1.0, epsilon = 1e-15);
        assert_eq!(entropy(&Pmf::point_mass(bin("x"), 1).unwrap()), 0.0);
        let b = Pmf::bernoulli(bin("x"), 0.2).unwrap();
        assert_abs_diff_eq!(entropy(&b), 0.7219, epsilon = 5e-5);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.2).unwrap(), 0.7219, epsilon = 5e-5);
        // H(1/5) - 2/5 is the Z-channel capacity quoted for the erasure example.
        assert_abs_diff_eq!(binary_entropy(0.2).unwrap() - 0.4, 0.3219, epsilon = 5e-5);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn marginalize_product_and_identity() {
        let p = Pmf::new(bin("a"), vec![0.3, 0.7]).unwrap().to_joint();
        let q = Pmf::new(Alphabet::new("b", 3).unwrap(), vec![0.2, 0.3, 0.5])
            .unwrap()
            .to_joint();
        let j = JointPmf::product(&p, &q);
        let m = j.marginalize(&[0]).unwrap();
        assert_eq!(m.axes()[0].name(), "a");
        for (x, y) in m.probs().iter().zip(p.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        assert_eq!(j.marginalize(&[0, 1]).unwrap(), j);
        let swapped = j.marginalize(&[1, 0]).unwrap();
        assert_abs_diff_eq!(swapped.get(&[2, 1]), 0.35, epsilon = 1e-15);
        assert!(j.marginalize(&[]).is_err());
        assert!(j.marginalize(&[2]).is_err());
        assert!(j.marginalize(&[0, 0]).is_err());
    }

    #[test]
    fn bec_marginal_of_y2() {
        // Uniform X1 through BEC(1/2), Y2 = (0, 1, e).
        let y2 = Alphabet::with_labels("y2", ["0", "1", "e"]).unwrap();
        let j = JointPmf::new(vec![bin("x1"), y2], vec![0.25, 0.0, 0.25, 0.0, 0.25, 0.25]).unwrap();
        let m = j.marginalize(&[1]).unwrap();
        assert_eq!(m.probs(), &[0.25, 0.25, 0.5]);
    }

    #[test]
    fn mutual_information_examples() {
        let p = Pmf::new(bin("a"), vec![0.3, 0.7]).unwrap().to_joint();
        let q = Pmf::new(bin("b"), vec![0.6, 0.4]).unwrap().to_joint();
        let j = JointPmf::product(&p, &q);
        assert_abs_diff_eq!(mutual_information(&j, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-15);

        let copy = JointPmf::new(vec![bin("a"), bin("b")], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(mutual_information(&copy, &[0], &[1]).unwrap(), 1.0, epsilon = 1e-15);

        let bsc = JointPmf::new(vec![bin("a"), bin("b")], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        assert_abs_diff_eq!(mutual_information(&bsc, &[0], &[1]).unwrap(), 0.2781, epsilon = 5e-5);

        assert_eq!(mutual_information(&bsc, &[0], &[0]), Err(Error::OverlappingGroups));
    }

    #[test]
    fn conditional_mutual_information_examples() {
        // Markov chain A -> C -> B: A uniform, C = BSC(0.1)(A), B = BSC(0.2)(C).
        let mut probs = vec![0.0; 8];
        for a in 0..2 {
            for c in 0..2 {
                for b in 0..2 {
                    let pc = if c == a { 0.9 } else { 0.1 };
                    let pb = if b == c { 0.8 } else { 0.2 };
                    probs[a * 4 + b * 2 + c] = 0.5 * pc * pb;
                }
            }
        }
        let j = JointPmf::new(vec![bin("a"), bin("b"), bin("c")], probs).unwrap();
        assert_abs_diff_eq!(
            conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        let ab = JointPmf::new(vec![bin("a"), bin("b")], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let c = Pmf::new(bin("c"), vec![0.3, 0.7]).unwrap().to_joint();
        let j = JointPmf::product(&ab, &c);
        assert_abs_diff_eq!(
            conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap(),
            mutual_information(&ab, &[0], &[1]).unwrap(),
            epsilon = 1e-12
        );
        assert_eq!(
            conditional_mutual_information(&j, &[0], &[1], &[1]),
            Err(Error::OverlappingGroups)
        );
    }

    #[test]
    fn cond_pmf_rows() {
        let c = CondPmf::new(vec![bin("x")], bin("y"), vec![0.9, 0.1, 0.2, 0.8]).unwrap();
        assert_eq!(c.row_for(&[1]), &[0.2, 0.8]);
        assert_eq!(c.prob(&[0], 1), 0.1);
        assert!(CondPmf::new(vec![bin("x")], bin("y"), vec![0.9, 0.2, 0.2, 0.8]).is_err());
    }

    #[test]
    fn measures_match_free_functions() {
        let j = JointPmf::new(
            vec![bin("a"), bin("b"), bin("c")],
            vec![0.1, 0.05, 0.2, 0.15, 0.05, 0.25, 0.1, 0.1],
        )
        .unwrap();
        let mut m = Measures::new(&j);
        assert_abs_diff_eq!(
            m.cmi(0b001, 0b010, 0b100),
            conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            m.mi(0b011, 0b100),
            mutual_information(&j, &[0, 1], &[2]).unwrap(),
            epsilon = 1e-15
        );
    }
}
