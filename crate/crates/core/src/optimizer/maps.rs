//! Enumeration of deterministic relay maps, symmetry reduction and sampling.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::DeterministicMap;
use crate::prob::Alphabet;

/// Tables of all maps `prod(sizes) -> codomain`, lexicographic with the last
/// entry varying fastest, or a seeded sample when there are more than `cap`.
pub(crate) enum Tables {
    All { next: Option<Vec<usize>>, codomain: usize },
    Listed(std::vec::IntoIter<Vec<usize>>),
}

impl Iterator for Tables {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        match self {
            Tables::Listed(it) => it.next(),
            Tables::All { next, codomain } => {
                let cur = next.take()?;
                let mut succ = cur.clone();
                let mut i = succ.len();
                let mut done = true;
                while i > 0 {
                    i -= 1;
                    succ[i] += 1;
                    if succ[i] < *codomain {
                        done = false;
                        break;
                    }
                    succ[i] = 0;
                }
                if !done {
                    *next = Some(succ);
                }
                Some(cur)
            }
        }
    }
}

pub(crate) fn map_count(domain: usize, codomain: usize) -> Option<u128> {
    (codomain as u128).checked_pow(domain as u32)
}

/// Constant maps and the projections `t(d) = d_i mod codomain`.
fn structural_tables(sizes: &[usize], codomain: usize) -> Vec<Vec<usize>> {
    let domain: usize = sizes.iter().product();
    let mut out: Vec<Vec<usize>> = (0..codomain).map(|c| vec![c; domain]).collect();
    for axis in 0..sizes.len() {
        let stride: usize = sizes[axis + 1..].iter().product();
        out.push((0..domain).map(|i| (i / stride % sizes[axis]) % codomain).collect());
    }
    let mut seen = HashSet::new();
    out.retain(|t| seen.insert(t.clone()));
    out
}

pub(crate) fn random_table<R: Rng>(domain: usize, codomain: usize, rng: &mut R) -> Vec<usize> {
    (0..domain).map(|_| rng.gen_range(0..codomain)).collect()
}

pub(crate) fn enumerate_tables(sizes: &[usize], codomain: usize, cap: usize, seed: u64) -> Tables {
    let domain: usize = sizes.iter().product();
    match map_count(domain, codomain) {
        Some(n) if n <= cap as u128 => Tables::All {
            next: Some(vec![0; domain]),
            codomain,
        },
        _ => {
            let mut out = structural_tables(sizes, codomain);
            let mut seen: HashSet<Vec<usize>> = out.iter().cloned().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut drawn = 0usize;
            let mut attempts = 0usize;
            while drawn < cap && attempts < cap.saturating_mul(8) {
                attempts += 1;
                let t = random_table(domain, codomain, &mut rng);
                if seen.insert(t.clone()) {
                    out.push(t);
                    drawn += 1;
                }
            }
            Tables::Listed(out.into_iter())
        }
    }
}

/// All deterministic maps from `inputs` to `output`: every table in
/// lexicographic order when there are at most `cap`, otherwise a seeded sample
/// of `cap` tables plus the constant and coordinate-projection maps.
///
/// ```
/// use relaycap::optimizer::enumerate_maps;
/// use relaycap::Alphabet;
/// let b = Alphabet::new("b", 2).unwrap();
/// let maps: Vec<_> = enumerate_maps(vec![b.clone(), b.clone()], b, 100, 0).collect();
/// assert_eq!(maps.len(), 16);
/// assert_eq!(maps[0].table(), &[0, 0, 0, 0]);
/// ```
pub fn enumerate_maps(
    inputs: Vec<Alphabet>,
    output: Alphabet,
    cap: usize,
    seed: u64,
) -> impl Iterator<Item = DeterministicMap> {
    let sizes: Vec<usize> = inputs.iter().map(Alphabet::size).collect();
    enumerate_tables(&sizes, output.size(), cap, seed).map(move |t| {
        DeterministicMap::new(inputs.clone(), output.clone(), t).expect("table entries lie in the codomain")
    })
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

const GROUP_LIMIT: usize = 1024;

/// Relabelings of map cells that leave an objective unchanged. Each element is
/// a cell permutation `pi`; the relabeled table is `t[pi[c]]`.
#[derive(Debug, Clone)]
pub(crate) enum Symmetry {
    None,
    /// Axis 0 permuted independently for each value of `axis`.
    PerValue {
        axis: usize,
    },
    /// Axis 0 permuted globally.
    Global,
    /// Axes 0 and 1 permuted independently of each other.
    Pair,
    /// Axis 1 permuted, and axis 0 permuted per value of axis 1.
    Nested,
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sizes[i + 1];
    }
    s
}

fn unflatten(mut c: usize, sizes: &[usize]) -> Vec<usize> {
    let mut d = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        d[i] = c % sizes[i];
        c /= sizes[i];
    }
    d
}

fn product_of<T: Clone>(choices: &[T], reps: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..reps {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn group_size(sym: &Symmetry, sizes: &[usize]) -> u128 {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    match sym {
        Symmetry::None => 1,
        Symmetry::Global => fact(sizes[0]),
        Symmetry::PerValue { axis } => fact(sizes[0]).saturating_pow(sizes[*axis] as u32),
        Symmetry::Pair => fact(sizes[0]).saturating_mul(fact(sizes[1])),
        Symmetry::Nested => fact(sizes[0])
            .saturating_pow(sizes[1] as u32)
            .saturating_mul(fact(sizes[1])),
    }
}

/// Cell permutations of the symmetry group, falling back to smaller groups
/// when the full one is too large to enumerate.
pub(crate) fn cell_group(sym: &Symmetry, sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut sym = sym.clone();
    while group_size(&sym, sizes) > GROUP_LIMIT as u128 {
        sym = match sym {
            Symmetry::PerValue { .. } | Symmetry::Nested | Symmetry::Pair => Symmetry::Global,
            _ => Symmetry::None,
        };
    }
    let st = strides(sizes);
    let cells: usize = sizes.iter().product();
    let flat = |d: &[usize]| d.iter().zip(&st).map(|(a, s)| a * s).sum::<usize>();
    let relabel = |f: &dyn Fn(&[usize]) -> Vec<usize>| -> Vec<usize> {
        (0..cells).map(|c| flat(&f(&unflatten(c, sizes)))).collect()
    };
    match sym {
        Symmetry::None => vec![(0..cells).collect()],
        Symmetry::Global => permutations(sizes[0])
            .iter()
            .map(|s| {
                relabel(&|d| {
                    let mut e = d.to_vec();
                    e[0] = s[d[0]];
                    e
                })
            })
            .collect(),
        Symmetry::PerValue { axis } => product_of(&permutations(sizes[0]), sizes[axis])
            .iter()
            .map(|ss| {
                relabel(&|d| {
                    let mut e = d.to_vec();
                    e[0] = ss[d[axis]][d[0]];
                    e
                })
            })
            .collect(),
        Symmetry::Pair => {
            let (p0, p1) = (permutations(sizes[0]), permutations(sizes[1]));
            let mut out = Vec::new();
            for a in &p0 {
                for b in &p1 {
                    out.push(relabel(&|d| {
                        let mut e = d.to_vec();
                        e[0] = a[d[0]];
                        e[1] = b[d[1]];
                        e
                    }));
                }
            }
            out
        }
        Symmetry::Nested => {
            let outer = permutations(sizes[1]);
            let inner = product_of(&permutations(sizes[0]), sizes[1]);
            let mut out = Vec::new();
            for t in &outer {
                for ss in &inner {
                    out.push(relabel(&|d| {
                        let mut e = d.to_vec();
                        e[0] = ss[d[1]][d[0]];
                        e[1] = t[d[1]];
                        e
                    }));
                }
            }
            out
        }
    }
}

/// The discrete half of a search domain: map tables with dead cells pinned
/// to 0, reduced modulo a relabeling group.
#[derive(Debug, Clone)]
pub(crate) struct MapSpace {
    pub sizes: Vec<usize>,
    pub codomain: usize,
    pub dead: Vec<bool>,
    pub group: Vec<Vec<usize>>,
}

impl MapSpace {
    pub fn new(sizes: Vec<usize>, codomain: usize, dead: Vec<bool>, sym: Symmetry) -> Self {
        let group = cell_group(&sym, &sizes);
        MapSpace {
            sizes,
            codomain,
            dead,
            group,
        }
    }

    pub fn cells(&self) -> usize {
        self.dead.len()
    }

    pub fn live_cells(&self) -> Vec<usize> {
        (0..self.cells()).filter(|&c| !self.dead[c]).collect()
    }

    fn image(&self, t: &[usize], pi: &[usize]) -> Vec<usize> {
        pi.iter().map(|&c| t[c]).collect()
    }

    pub fn is_canonical(&self, t: &[usize]) -> bool {
        self.group
            .iter()
            .all(|pi| pi.iter().map(|&c| t[c]).ge(t.iter().copied()))
    }

    pub fn canonicalize(&self, t: &[usize]) -> Vec<usize> {
        let mut best = t.to_vec();
        for pi in &self.group {
            let img = self.image(t, pi);
            if img < best {
                best = img;
            }
        }
        best
    }

    fn pin_dead(&self, t: &mut [usize]) {
        for (c, x) in t.iter_mut().enumerate() {
            if self.dead[c] {
                *x = 0;
            }
        }
    }

    /// Canonical candidate tables and whether they come from sampling.
    pub fn candidates(&self, cap: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
        let live = self.live_cells();
        let exhaustive = matches!(map_count(live.len(), self.codomain), Some(n) if n <= cap as u128);
        let mut out = Vec::new();
        if exhaustive {
            for sub in (Tables::All {
                next: Some(vec![0; live.len()]),
                codomain: self.codomain,
            }) {
                let mut t = vec![0; self.cells()];
                for (&c, &x) in live.iter().zip(&sub) {
                    t[c] = x;
                }
                if self.is_canonical(&t) {
                    out.push(t);
                }
            }
            (out, false)
        } else {
            let mut seen = HashSet::new();
            for mut t in enumerate_tables(&self.sizes, self.codomain, cap, seed) {
                self.pin_dead(&mut t);
                let t = self.canonicalize(&t);
                if seen.insert(t.clone()) {
                    out.push(t);
                }
            }
            (out, true)
        }
    }
}
