//! The simplicial monoid F⁺K for K the minimal simplicial circle.
//!
//! In dimension `n` the monoid is free on the `n` generators `α_1 … α_n`,
//! where `α_k` is the iterated degeneracy of the nondegenerate 1-simplex `y`
//! whose subscript string is `0…01…1` with `k − 1` ones. Seen as a monotone
//! map `[n] → [1]`, `α_k` sends the vertices `0..=n−k` to 0 and the last `k`
//! vertices to 1. Faces delete a vertex and degeneracies double one, which
//! gives the closed forms used below. Words are stored as their index
//! sequences; the empty word is the identity `e_n`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, MorseError, Result};

/// Largest supported simplex dimension (indices are stored as `u8`).
pub const MAX_DIM: usize = u8::MAX as usize;

/// A generator `α_index` of the free monoid in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    dim: usize,
    index: usize,
}

impl Generator {
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(domain(format!("generator dimension {dim} out of range 1..={MAX_DIM}")));
        }
        if index == 0 || index > dim {
            return Err(domain(format!("generator index {index} out of range 1..={dim}")));
        }
        Ok(Self { dim, index })
    }

    /// The nondegenerate 1-simplex `y = α_1^(1)`.
    pub fn y() -> Self {
        Self { dim: 1, index: 1 }
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn index(self) -> usize {
        self.index
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}^({})", self.index, self.dim)
    }
}

/// `d_i(α_k^(n))` on raw indices; `None` is the identity.
#[inline]
pub(crate) fn face_index(n: usize, k: usize, i: usize) -> Option<usize> {
    let k = if i <= n - k { k } else { k - 1 };
    // the image in dimension n-1 must keep at least one vertex on each side
    if k == 0 || k == n {
        None
    } else {
        Some(k)
    }
}

/// `s_j(α_k^(n))` on raw indices.
#[inline]
pub(crate) fn degeneracy_index(n: usize, k: usize, j: usize) -> usize {
    if j <= n - k {
        k
    } else {
        k + 1
    }
}

/// `d_i` of a generator. `Ok(None)` stands for the absorbed identity.
pub fn face_generator(g: Generator, i: usize) -> Result<Option<Generator>> {
    if i > g.dim {
        return Err(domain(format!("face index {i} out of range 0..={}", g.dim)));
    }
    Ok(face_index(g.dim, g.index, i).map(|index| Generator { dim: g.dim - 1, index }))
}

/// `s_j` of a generator.
pub fn degeneracy_generator(g: Generator, j: usize) -> Result<Generator> {
    if j > g.dim {
        return Err(domain(format!("degeneracy index {j} out of range 0..={}", g.dim)));
    }
    if g.dim + 1 > MAX_DIM {
        return Err(domain("degeneracy would exceed the supported dimension"));
    }
    Ok(Generator {
        dim: g.dim + 1,
        index: degeneracy_index(g.dim, g.index, j),
    })
}

/// An `n`-simplex of F⁺K: a word in the generators of dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSimplex", into = "RawSimplex")]
pub struct Simplex {
    dim: usize,
    word: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawSimplex {
    dim: usize,
    word: Vec<usize>,
}

impl TryFrom<RawSimplex> for Simplex {
    type Error = MorseError;

    fn try_from(raw: RawSimplex) -> Result<Self> {
        Simplex::new(raw.dim, raw.word)
    }
}

impl From<Simplex> for RawSimplex {
    fn from(s: Simplex) -> Self {
        RawSimplex {
            dim: s.dim,
            word: s.word.iter().map(|&k| k as usize).collect(),
        }
    }
}

impl Simplex {
    pub fn new(dim: usize, word: impl IntoIterator<Item = usize>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(domain(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        let word = word
            .into_iter()
            .map(|k| {
                if k == 0 || k > dim {
                    Err(domain(format!("generator index {k} out of range 1..={dim}")))
                } else {
                    Ok(k as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, word })
    }

    pub(crate) fn from_raw(dim: usize, word: Vec<u8>) -> Self {
        debug_assert!(word.iter().all(|&k| k >= 1 && k as usize <= dim));
        Self { dim, word }
    }

    /// The identity `e_n`.
    pub fn identity(dim: usize) -> Self {
        Self { dim, word: Vec::new() }
    }

    /// `y^r`, with `y^0 = e_1`.
    pub fn y_power(r: usize) -> Self {
        Self { dim: 1, word: vec![1; r] }
    }

    pub fn from_generator(g: Generator) -> Self {
        Self {
            dim: g.dim,
            word: vec![g.index as u8],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn letters(&self) -> impl Iterator<Item = Generator> + '_ {
        self.word.iter().map(|&k| Generator {
            dim: self.dim,
            index: k as usize,
        })
    }

    pub fn stratum(&self) -> StratumKey {
        StratumKey::new(self.dim, self.len())
    }

    /// Word concatenation; both factors must share a dimension.
    pub fn concat(&self, other: &Simplex) -> Result<Simplex> {
        if self.dim != other.dim {
            return Err(MorseError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(Simplex { dim: self.dim, word })
    }

    /// Face map `d_i`, without range checks.
    pub(crate) fn face_unchecked(&self, i: usize) -> Simplex {
        let n = self.dim;
        let word = self
            .word
            .iter()
            .filter_map(|&k| face_index(n, k as usize, i).map(|k| k as u8))
            .collect();
        Simplex { dim: n - 1, word }
    }

    /// Degeneracy `s_j`, without range checks.
    pub(crate) fn degeneracy_unchecked(&self, j: usize) -> Simplex {
        let n = self.dim;
        let word = self
            .word
            .iter()
            .map(|&k| degeneracy_index(n, k as usize, j) as u8)
            .collect();
        Simplex { dim: n + 1, word }
    }

    /// Compact form with powers, e.g. `y^4`, `a1^2.a2`, `e`.
    pub fn pretty(&self) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.word.len() {
            let k = self.word[i];
            let mut run = 1;
            while i + run < self.word.len() && self.word[i + run] == k {
                run += 1;
            }
            let base = if self.dim == 1 { "y".to_string() } else { format!("a{k}") };
            if run == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{run}"));
            }
            i += run;
        }
        parts.join(".")
    }

    /// Parses the canonical syntax (`e` or `a3.a2.a2`) in a given dimension.
    pub fn parse(dim: usize, text: &str) -> Result<Simplex> {
        let text = text.trim();
        if text == "e" {
            return Ok(Simplex::identity(dim));
        }
        let word = text
            .split('.')
            .map(|tok| {
                tok.strip_prefix('a')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| MorseError::Parse(format!("bad generator token `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Simplex::new(dim, word)
    }
}

/// Canonical text form: `e` for the identity, otherwise `a3.a2.a2`.
impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        for (pos, k) in self.word.iter().enumerate() {
            if pos > 0 {
                f.write_str(".")?;
            }
            write!(f, "a{k}")?;
        }
        Ok(())
    }
}

/// Dimension first, then the word-length-then-lexicographic order.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A (dimension, word length) stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumKey {
    pub dim: usize,
    pub length: usize,
}

impl StratumKey {
    pub fn new(dim: usize, length: usize) -> Self {
        Self { dim, length }
    }

    /// Number of words in the stratum, `dim^length` (and 1 for length 0).
    pub fn size(self) -> u128 {
        if self.length == 0 {
            return 1;
        }
        (self.dim as u128).saturating_pow(self.length as u32)
    }
}

impl fmt::Display for StratumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dim, self.length)
    }
}

/// `d_i x`. The image has dimension `x.dim − 1` and never a longer word.
pub fn face(x: &Simplex, i: usize) -> Result<Simplex> {
    if x.dim == 0 {
        return Err(domain("a 0-simplex has no faces"));
    }
    if i > x.dim {
        return Err(domain(format!("face index {i} out of range 0..={}", x.dim)));
    }
    Ok(x.face_unchecked(i))
}

/// `s_j x`. Word length is preserved.
pub fn degeneracy(x: &Simplex, j: usize) -> Result<Simplex> {
    if j > x.dim {
        return Err(domain(format!("degeneracy index {j} out of range 0..={}", x.dim)));
    }
    if x.dim + 1 > MAX_DIM {
        return Err(domain("degeneracy would exceed the supported dimension"));
    }
    Ok(x.degeneracy_unchecked(j))
}

/// Witness that a simplex lies in the image of `s_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyWitness {
    pub j: usize,
    pub preimage: Simplex,
}

/// Returns the least `j` with `s_j(d_j x) = x`, if any.
///
/// Dimension-0 simplices are nondegenerate. Identities `e_n` with `n ≥ 1`
/// come out degenerate (`e_n = s_0 e_{n−1}`).
pub fn degeneracy_witness(x: &Simplex) -> Option<DegeneracyWitness> {
    if x.dim == 0 {
        return None;
    }
    (0..x.dim).find_map(|j| {
        let pre = x.face_unchecked(j);
        (pre.degeneracy_unchecked(j) == *x).then_some(DegeneracyWitness { j, preimage: pre })
    })
}

pub fn is_degenerate(x: &Simplex) -> bool {
    if x.dim == 0 {
        return false;
    }
    // s_j(d_j x) = x exactly when no letter has its 0/1 cut between vertices j and j+1
    let n = x.dim;
    let mut cut = vec![false; n];
    for &k in &x.word {
        cut[n - k as usize] = true;
    }
    cut.iter().any(|c| !c)
}

/// The total order on a fixed dimension: shorter words first, then
/// lexicographic by generator index.
pub fn lex_compare(a: &Simplex, b: &Simplex) -> Result<Ordering> {
    if a.dim != b.dim {
        return Err(MorseError::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(a.cmp(b))
}

/// Lexicographic rank of a simplex inside its stratum.
pub fn stratum_rank(x: &Simplex) -> u128 {
    x.word
        .iter()
        .fold(0u128, |acc, &k| acc * x.dim as u128 + (k as u128 - 1))
}

/// Iterator over the words of one stratum in increasing order.
#[derive(Debug, Clone)]
pub struct StratumIter {
    dim: usize,
    current: Option<Vec<u8>>,
}

impl Iterator for StratumIter {
    type Item = Simplex;

    fn next(&mut self) -> Option<Simplex> {
        let word = self.current.take()?;
        let out = Simplex {
            dim: self.dim,
            word: word.clone(),
        };
        let mut next = word;
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            if (next[pos] as usize) < self.dim {
                next[pos] += 1;
                for slot in next.iter_mut().skip(pos + 1) {
                    *slot = 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All words of `key.length` letters over `α_1 … α_dim`, in lex order.
pub fn enumerate_stratum(key: StratumKey) -> StratumIter {
    let current = if key.length == 0 {
        Some(Vec::new())
    } else if key.dim == 0 || key.dim > MAX_DIM {
        None
    } else {
        Some(vec![1; key.length])
    };
    StratumIter { dim: key.dim, current }
}
