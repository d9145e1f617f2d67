//! Integer chains on the simplices of F⁺K.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, MorseError, Result};
use crate::simplicial::{is_degenerate, Simplex};

/// Which simplices count as basis elements of the chain groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainMode {
    /// Every simplex, degenerate or not, is a basis element.
    #[default]
    Unnormalized,
    /// Degenerate faces are dropped from boundaries.
    Normalized,
}

/// A finite integer combination of simplices of one dimension.
///
/// Terms are kept in the canonical simplex order and zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: usize,
    terms: BTreeMap<Simplex, BigInt>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(x: Simplex) -> Self {
        Self::term(BigInt::one(), x)
    }

    pub fn term(coef: impl Into<BigInt>, x: Simplex) -> Self {
        let mut c = Self::zero(x.dim());
        c.add_term(coef, x);
        c
    }

    /// Builds a chain from `(coefficient, simplex)` pairs of dimension `dim`.
    pub fn from_terms<C: Into<BigInt>>(
        dim: usize,
        terms: impl IntoIterator<Item = (C, Simplex)>,
    ) -> Result<Self> {
        let mut c = Self::zero(dim);
        for (coef, x) in terms {
            if x.dim() != dim {
                return Err(MorseError::DimensionMismatch {
                    expected: dim,
                    found: x.dim(),
                });
            }
            c.add_term(coef, x);
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Simplex> {
        self.terms.keys()
    }

    /// Coefficient of `x` (zero when absent).
    pub fn coefficient(&self, x: &Simplex) -> BigInt {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    /// Longest word in the support.
    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().map(Simplex::len).max()
    }

    /// Adds `coef · x`. Panics on a dimension mismatch.
    pub fn add_term(&mut self, coef: impl Into<BigInt>, x: Simplex) {
        assert_eq!(x.dim(), self.dim, "simplex {x} does not live in dimension {}", self.dim);
        let coef = coef.into();
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, scale: &BigInt, other: &Chain) -> Result<()> {
        self.check_dim(other)?;
        if scale.is_zero() {
            return Ok(());
        }
        for (x, c) in &other.terms {
            self.add_term(scale * c, x.clone());
        }
        Ok(())
    }

    pub fn scaled(&self, scale: &BigInt) -> Chain {
        if scale.is_zero() {
            return Chain::zero(self.dim);
        }
        Chain {
            dim: self.dim,
            terms: self.terms.iter().map(|(x, c)| (x.clone(), c * scale)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Chain) -> Result<Chain> {
        let mut out = self.clone();
        out.add_scaled(&BigInt::one(), other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Chain) -> Result<Chain> {
        let mut out = self.clone();
        out.add_scaled(&-BigInt::one(), other)?;
        Ok(out)
    }

    fn check_dim(&self, other: &Chain) -> Result<()> {
        if self.dim != other.dim {
            return Err(MorseError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Human-readable form such as `y^2 - 2·a1.a2 + e`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (pos, (x, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if pos == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            if !mag.is_one() {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(&x.pretty());
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        self.checked_add(rhs).expect("adding chains of different dimensions")
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        self.checked_sub(rhs).expect("subtracting chains of different dimensions")
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self.scaled(&-BigInt::one())
    }
}

/// `∂x = Σ (−1)^i d_i x` for a single simplex.
pub fn boundary_of_simplex(x: &Simplex, mode: ChainMode) -> Result<Chain> {
    if x.dim() == 0 {
        return Err(domain("boundary of a 0-chain is undefined"));
    }
    let mut out = Chain::zero(x.dim() - 1);
    for i in 0..=x.dim() {
        let f = x.face_unchecked(i);
        if mode == ChainMode::Normalized && is_degenerate(&f) {
            continue;
        }
        out.add_term(if i % 2 == 0 { 1 } else { -1 }, f);
    }
    Ok(out)
}

/// Linear extension of the alternating face sum.
pub fn boundary(c: &Chain, mode: ChainMode) -> Result<Chain> {
    if c.dim == 0 {
        return Err(domain("boundary of a 0-chain is undefined"));
    }
    let mut out = Chain::zero(c.dim - 1);
    for (x, coef) in &c.terms {
        if mode == ChainMode::Normalized && is_degenerate(x) {
            continue;
        }
        for i in 0..=x.dim() {
            let f = x.face_unchecked(i);
            if mode == ChainMode::Normalized && is_degenerate(&f) {
                continue;
            }
            let signed = if i % 2 == 0 { coef.clone() } else { -coef };
            out.add_term(signed, f);
        }
    }
    Ok(out)
}

/// `⟨c, x⟩`: the coefficient of `x` in `c`, cells being orthonormal.
pub fn inner(c: &Chain, x: &Simplex) -> Result<BigInt> {
    if c.dim != x.dim() {
        return Err(MorseError::DimensionMismatch {
            expected: c.dim,
            found: x.dim(),
        });
    }
    Ok(c.coefficient(x))
}

/// `⟨∂τ, σ⟩ = Σ_{i : d_i τ = σ} (−1)^i`.
pub fn incidence(tau: &Simplex, sigma: &Simplex) -> Result<i64> {
    if tau.dim() != sigma.dim() + 1 {
        return Err(MorseError::DimensionMismatch {
            expected: sigma.dim() + 1,
            found: tau.dim(),
        });
    }
    Ok((0..=tau.dim())
        .filter(|&i| tau.face_unchecked(i) == *sigma)
        .map(|i| if i % 2 == 0 { 1 } else { -1 })
        .sum())
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    word: Vec<usize>,
    #[serde(with = "crate::bigjson")]
    coef: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    dim: usize,
    terms: Vec<RawTerm>,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(x, c)| RawTerm {
                word: x.word().iter().map(|&k| k as usize).collect(),
                coef: c.clone(),
            })
            .collect();
        RawChain { dim: self.dim, terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawChain::deserialize(deserializer)?;
        let mut c = Chain::zero(raw.dim);
        for t in raw.terms {
            let x = Simplex::new(raw.dim, t.word).map_err(D::Error::custom)?;
            c.add_term(t.coef, x);
        }
        Ok(c)
    }
}
