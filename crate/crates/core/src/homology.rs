//! Exact Smith normal form and the homology of truncated Morse complexes.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ChainMode;
use crate::error::{domain, MorseError, Result};
use crate::flow::FlowContext;
use crate::pairing::{build_matching, PairingFlags, Scope};
use crate::simplicial::Simplex;

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(domain("ragged matrix rows"));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(MorseError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            if !v.is_zero() {
                self[(dst, j)] += v;
            }
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            if !v.is_zero() {
                self[(i, dst)] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of a Smith normal form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    /// Unimodular `(U, V)` with `U · m · V` diagonal, when requested.
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// The diagonal matrix of the shape of the input.
    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }

    /// Invariant factors different from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

/// Smith normal form by repeated Euclidean elimination, with the pivot
/// always the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix, certified: bool) -> SnfResult {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut u = certified.then(|| IntMatrix::identity(rows));
    let mut v = certified.then(|| IntMatrix::identity(cols));

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = -(&a[(i, t)] / &a[(t, t)]);
                    a.add_row(i, t, &q);
                    if let Some(u) = u.as_mut() {
                        u.add_row(i, t, &q);
                    }
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = -(&a[(t, j)] / &a[(t, t)]);
                    a.add_col(j, t, &q);
                    if let Some(v) = v.as_mut() {
                        v.add_col(j, t, &q);
                    }
                }
            }
            let line = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            if let Some((i, j)) = min_abs_entry(&a, line) {
                // a remainder smaller than the pivot survived; promote it
                a.swap_rows(t, i);
                a.swap_cols(t, j);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(t, i);
                }
                if let Some(v) = v.as_mut() {
                    v.swap_cols(t, j);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }

    SnfResult {
        rank: t,
        invariant_factors: (0..t).map(|i| a[(i, i)].clone()).collect(),
        transforms: u.zip(v),
    }
}

fn min_abs_entry(
    a: &IntMatrix,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    cells
        .filter(|&p| !a[p].is_zero())
        .min_by(|&p, &q| a[p].abs().cmp(&a[q].abs()))
}

/// Checks a certified result against its input: `U·m·V` equals the
/// diagonal, the factors form a divisibility chain, and `U`, `V` are
/// unimodular.
pub fn verify_snf(m: &IntMatrix, snf: &SnfResult) -> Result<()> {
    let fail = |msg: String| Err(MorseError::SelfCheck(msg));
    for w in snf.invariant_factors.windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return fail(format!("invariant factor {} does not divide {}", w[0], w[1]));
        }
    }
    if snf.invariant_factors.iter().any(|f| !f.is_positive()) {
        return fail("non-positive invariant factor".into());
    }
    let Some((u, v)) = &snf.transforms else {
        return Ok(());
    };
    if u.mul(m)?.mul(v)? != snf.diagonal(m.rows, m.cols) {
        return fail("U·m·V is not the Smith diagonal".into());
    }
    for (name, x) in [("U", u), ("V", v)] {
        if !determinant(x).abs().is_one() {
            return fail(format!("{name} is not unimodular"));
        }
    }
    Ok(())
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[(n - 1, n - 1)]
}

/// The matrix of `∂̃` from critical `d`-cells to critical `(d−1)`-cells of
/// word length at most `max_length`. Row `i` holds `∂̃ basis_hi[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseSlice {
    pub degree: usize,
    pub max_length: usize,
    pub scope: Scope,
    pub basis_lo: Vec<Simplex>,
    pub basis_hi: Vec<Simplex>,
    #[serde(with = "crate::bigjson::matrix")]
    pub matrix: Vec<Vec<BigInt>>,
}

impl MorseSlice {
    pub fn build(ctx: &FlowContext, degree: usize, max_length: usize) -> Result<Self> {
        let basis_hi = ctx.matching().critical_cells(degree, max_length)?;
        let basis_lo = match degree {
            0 => Vec::new(),
            d => ctx.matching().critical_cells(d - 1, max_length)?,
        };
        let matrix = basis_hi
            .par_iter()
            .map(|c| -> Result<Vec<BigInt>> {
                if degree == 0 {
                    return Ok(Vec::new());
                }
                let b = ctx.morse_boundary(c)?;
                if let Some(x) = b.support().find(|x| basis_lo.binary_search(x).is_err()) {
                    return Err(MorseError::SelfCheck(format!(
                        "∂̃({c}) reaches {x}, outside the length-{max_length} basis"
                    )));
                }
                Ok(basis_lo.iter().map(|x| b.coefficient(x)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            degree,
            max_length,
            scope: ctx.scope(),
            basis_lo,
            basis_hi,
            matrix,
        })
    }

    pub fn int_matrix(&self) -> IntMatrix {
        IntMatrix {
            rows: self.basis_hi.len(),
            cols: self.basis_lo.len(),
            data: self.matrix.iter().flatten().cloned().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// One row per critical `d`-cell, one column per critical `(d−1)`-cell.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("cell".to_string()).chain(self.basis_lo.iter().map(ToString::to_string));
        let io = |e: csv::Error| domain(e.to_string());
        w.write_record(header).map_err(io)?;
        for (c, row) in self.basis_hi.iter().zip(&self.matrix) {
            let rec = std::iter::once(c.to_string()).chain(row.iter().map(ToString::to_string));
            w.write_record(rec).map_err(io)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| domain(e.to_string()))?).map_err(|e| domain(e.to_string()))
    }
}

/// `H_d` as a rank and a list of torsion coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `H_d = ker ∂̃_d / im ∂̃_{d+1}` from the slices at degrees `d` and `d+1`.
///
/// Also verifies `∂̃_d ∘ ∂̃_{d+1} = 0` and, in test builds, the SNF
/// certificates.
pub fn homology_of_slices(lo: &MorseSlice, hi: &MorseSlice) -> Result<HomologyGroup> {
    if hi.degree != lo.degree + 1 {
        return Err(domain(format!(
            "slices at degrees {} and {} are not consecutive",
            lo.degree, hi.degree
        )));
    }
    if lo.basis_hi != hi.basis_lo || lo.max_length != hi.max_length {
        return Err(domain("slices do not share their middle basis"));
    }
    let m_lo = lo.int_matrix();
    let m_hi = hi.int_matrix();
    if !m_hi.mul(&m_lo)?.is_zero() {
        return Err(MorseError::SelfCheck(format!(
            "∂̃∂̃ ≠ 0 between degrees {} and {}",
            hi.degree,
            lo.degree.saturating_sub(1)
        )));
    }
    let certified = cfg!(debug_assertions);
    let (snf_lo, snf_hi) = rayon::join(
        || smith_normal_form(&m_lo, certified),
        || smith_normal_form(&m_hi, certified),
    );
    if certified {
        verify_snf(&m_lo, &snf_lo)?;
        verify_snf(&m_hi, &snf_hi)?;
    }
    Ok(HomologyGroup {
        betti: lo.basis_hi.len() - snf_lo.rank - snf_hi.rank,
        torsion: snf_hi.torsion(),
    })
}

/// `H_d` of the critical cells of word length at most `max_length`.
pub fn homology(ctx: &FlowContext, degree: usize, max_length: usize) -> Result<HomologyGroup> {
    let (lo, hi) = rayon::join(
        || MorseSlice::build(ctx, degree, max_length),
        || MorseSlice::build(ctx, degree + 1, max_length),
    );
    homology_of_slices(&lo?, &hi?)
}

/// The smallest flow context able to compute `H_d` up to `max_length`.
pub fn context_for(
    degree: usize,
    max_length: usize,
    flags: PairingFlags,
    mode: ChainMode,
) -> Result<FlowContext> {
    let (matching, _) = build_matching(Scope::new(degree + 2, max_length), flags)?;
    FlowContext::new(matching, mode)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportScope {
    pub max_length: usize,
}

/// The JSON homology report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub degree: usize,
    pub scope: ReportScope,
    pub betti: usize,
    #[serde(with = "crate::bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyReport {
    pub fn new(degree: usize, max_length: usize, group: HomologyGroup) -> Self {
        Self {
            degree,
            scope: ReportScope { max_length },
            betti: group.betti,
            torsion: group.torsion,
        }
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            betti: self.betti,
            torsion: self.torsion.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub degree: usize,
    pub entries: Vec<HomologyReport>,
    /// First bound from which every later answer in the range agrees.
    pub stable_from: Option<usize>,
}

/// `H_d` at each length bound in `lengths`; an empty range gives an empty
/// report. The context must decide dimension `d + 1` up to the last bound.
pub fn stability_scan(
    ctx: &FlowContext,
    degree: usize,
    lengths: RangeInclusive<usize>,
) -> Result<StabilityReport> {
    let entries = lengths
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|l| Ok(HomologyReport::new(degree, l, homology(ctx, degree, l)?)))
        .collect::<Result<Vec<_>>>()?;
    let stable_from = entries.last().map(|last| {
        let tail = entries
            .iter()
            .rev()
            .take_while(|e| e.betti == last.betti && e.torsion == last.torsion)
            .count();
        entries[entries.len() - tail].scope.max_length
    });
    Ok(StabilityReport {
        degree,
        entries,
        stable_from,
    })
}
