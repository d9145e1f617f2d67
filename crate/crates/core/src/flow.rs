//! The discrete vector field `V`, the flow `Φ = id + ∂V + V∂`, its
//! stabilization `Φ^∞` and the Morse boundary on critical cells.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chain::{boundary, incidence, Chain, ChainMode};
use crate::error::{domain, MorseError, Result};
use crate::pairing::{validate_matching, Matching, Scope, Verdict};
use crate::simplicial::Simplex;

/// Default cap on flow iterations before giving up.
pub const DEFAULT_ITERATION_CAP: usize = 100_000;

/// The special simplices that carry names in the homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NamedCell {
    /// `σ_k = α_k α_{k−1} ⋯ α_1`; `σ_0 = e`, `σ_1 = y`.
    Sigma { k: usize },
    /// `τ_k = α_k ⋯ α_3 α_2²`; `τ_0 = e`, `τ_1 = y`.
    Tau { k: usize },
    /// `σ_r` with its first two letters swapped.
    SigmaTilde { r: usize },
    /// `τ_r` with its first two letters swapped.
    TauTilde { r: usize },
    /// `α_{k+1} ⋯ α_1` with `α_s` removed, a `(k+1)`-simplex.
    Beta { k: usize, s: usize },
    YPower { r: usize },
    Identity { dim: usize },
}

impl NamedCell {
    pub fn expand(self) -> Result<Simplex> {
        let descending = |top: usize| (1..=top).rev().collect::<Vec<_>>();
        match self {
            NamedCell::Sigma { k: 0 } | NamedCell::Tau { k: 0 } => Ok(Simplex::identity(0)),
            NamedCell::Sigma { k: 1 } | NamedCell::Tau { k: 1 } => Ok(Simplex::y_power(1)),
            NamedCell::Sigma { k } => Simplex::new(k, descending(k)),
            NamedCell::Tau { k } => {
                let mut w: Vec<usize> = (3..=k).rev().collect();
                w.extend([2, 2]);
                Simplex::new(k, w)
            }
            NamedCell::SigmaTilde { r } => {
                if r < 2 {
                    return Err(domain(format!("sigma~({r}) needs r ≥ 2")));
                }
                let mut w = descending(r);
                w.swap(0, 1);
                Simplex::new(r, w)
            }
            NamedCell::TauTilde { r } => {
                if r < 3 {
                    return Err(domain(format!("tau~({r}) needs r ≥ 3")));
                }
                let mut w = NamedCell::Tau { k: r }.expand()?.word().iter().map(|&k| k as usize).collect::<Vec<_>>();
                w.swap(0, 1);
                Simplex::new(r, w)
            }
            NamedCell::Beta { k, s } => {
                if k < 1 || s < 1 || s > k {
                    return Err(domain(format!("beta({k},{s}) needs 1 ≤ s ≤ k")));
                }
                Simplex::new(k + 1, descending(k + 1).into_iter().filter(|&m| m != s))
            }
            NamedCell::YPower { r } => Ok(Simplex::y_power(r)),
            NamedCell::Identity { dim } => Ok(Simplex::identity(dim)),
        }
    }
}

impl fmt::Display for NamedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NamedCell::Sigma { k } => write!(f, "sigma({k})"),
            NamedCell::Tau { k } => write!(f, "tau({k})"),
            NamedCell::SigmaTilde { r } => write!(f, "sigma~({r})"),
            NamedCell::TauTilde { r } => write!(f, "tau~({r})"),
            NamedCell::Beta { k, s } => write!(f, "beta({k},{s})"),
            NamedCell::YPower { r } => write!(f, "y^{r}"),
            NamedCell::Identity { dim } => write!(f, "e({dim})"),
        }
    }
}

/// A validated matching together with the chain conventions of a flow run.
#[derive(Debug, Clone)]
pub struct FlowContext {
    matching: Matching,
    mode: ChainMode,
    iteration_cap: usize,
    verdict: Verdict,
}

impl FlowContext {
    /// Validates the matching; an invalid one is refused.
    pub fn new(matching: Matching, mode: ChainMode) -> Result<Self> {
        let verdict = validate_matching(&matching.pairs(), matching.scope())?;
        if !verdict.valid {
            return Err(MorseError::InvalidMatching(format!("{:?}", verdict.violations)));
        }
        Ok(Self {
            matching,
            mode,
            iteration_cap: DEFAULT_ITERATION_CAP,
            verdict,
        })
    }

    pub fn with_iteration_cap(mut self, cap: usize) -> Self {
        self.iteration_cap = cap;
        self
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn scope(&self) -> Scope {
        self.matching.scope()
    }

    pub fn mode(&self) -> ChainMode {
        self.mode
    }

    pub fn verdict(&self) -> &Verdict {
        &self.verdict
    }

    fn require_decided(&self, c: &Chain) -> Result<()> {
        let scope = self.scope();
        match c.support().find(|x| !scope.decides(x)) {
            Some(x) => Err(scope.out_of_scope(x)),
            None => Ok(()),
        }
    }

    /// Whether `x` is critical, failing if the scope does not decide it.
    pub fn is_critical(&self, x: &Simplex) -> Result<bool> {
        if !self.scope().decides(x) {
            return Err(self.scope().out_of_scope(x));
        }
        Ok(self.matching.is_critical(x))
    }

    /// `V(σ) = −⟨∂τ, σ⟩ τ` for `σ ≺ τ`, and `0` on unmatched cells.
    pub fn apply_v(&self, c: &Chain) -> Result<Chain> {
        self.require_decided(c)?;
        let mut out = Chain::zero(c.dim() + 1);
        for (x, coef) in c.iter() {
            if let Some(tau) = self.matching.upper(x) {
                let inc = incidence(tau, x)?;
                out.add_term(-(coef * BigInt::from(inc)), tau.clone());
            }
        }
        Ok(out)
    }

    fn chain_boundary(&self, c: &Chain) -> Result<Chain> {
        if c.dim() == 0 {
            return Ok(Chain::zero(0));
        }
        boundary(c, self.mode)
    }

    /// `Φ(c) = c + ∂V(c) + V(∂c)`.
    pub fn apply_flow(&self, c: &Chain) -> Result<Chain> {
        let v = self.apply_v(c)?;
        let dv = boundary(&v, self.mode)?;
        let mut out = c.checked_add(&dv)?;
        if c.dim() > 0 {
            let vd = self.apply_v(&self.chain_boundary(c)?)?;
            out = out.checked_add(&vd)?;
        }
        Ok(out)
    }

    /// Iterates `Φ` to its fixed point, returning the stable chain and the
    /// number of applications of `Φ` that changed the chain.
    pub fn stabilize(&self, c: &Chain) -> Result<(Chain, usize)> {
        let mut cur = c.clone();
        let mut orbit: Vec<String> = Vec::new();
        for iterations in 0..=self.iteration_cap {
            let next = self.apply_flow(&cur)?;
            if next == cur {
                return Ok((cur, iterations));
            }
            if orbit.len() == 4 {
                orbit.remove(0);
            }
            orbit.push(next.pretty());
            cur = next;
        }
        Err(MorseError::IterationCap {
            iterations: self.iteration_cap,
            orbit,
        })
    }

    /// `Φ^∞` applied to a chain.
    pub fn stable(&self, c: &Chain) -> Result<Chain> {
        Ok(self.stabilize(c)?.0)
    }

    /// The Morse boundary `∂̃c` of a critical cell, as a chain on critical
    /// cells.
    ///
    /// Computed both as `Φ^∞ ∂c` and as `∂ Φ^∞ c`; the two stable chains
    /// must agree and a mismatch is reported as a failed self-check.
    pub fn morse_boundary(&self, c: &Simplex) -> Result<Chain> {
        if c.dim() == 0 {
            return Err(domain("a 0-cell has no Morse boundary"));
        }
        if !self.is_critical(c)? {
            return Err(domain(format!("{c} is not critical")));
        }
        let unit = Chain::unit(c.clone());
        let via_boundary = self.stable(&boundary(&unit, self.mode)?)?;
        let via_flow = boundary(&self.stable(&unit)?, self.mode)?;
        if via_boundary != via_flow {
            return Err(MorseError::SelfCheck(format!(
                "Φ^∞∂({c}) = {via_boundary} but ∂Φ^∞({c}) = {via_flow}"
            )));
        }
        let mut out = Chain::zero(c.dim() - 1);
        for (x, coef) in via_boundary.iter() {
            if self.is_critical(x)? {
                out.add_term(coef.clone(), x.clone());
            }
        }
        Ok(out)
    }

    /// `⟨∂̃c, σ⟩` for critical `c` and `σ`.
    pub fn morse_boundary_entry(&self, c: &Simplex, sigma: &Simplex) -> Result<BigInt> {
        if c.dim() != sigma.dim() + 1 {
            return Err(MorseError::DimensionMismatch {
                expected: sigma.dim() + 1,
                found: c.dim(),
            });
        }
        if !self.is_critical(sigma)? {
            return Err(domain(format!("{sigma} is not critical")));
        }
        Ok(self.morse_boundary(c)?.coefficient(sigma))
    }
}
