use std::collections::BTreeMap;

use fk_morse::chain::ChainMode;
use fk_morse::flow::FlowContext;
use fk_morse::homology::{context_for, stability_scan, StabilityReport};
use fk_morse::pairing::{build_matching, pair_stratum, PairingFlags, Scope};
use fk_morse::simplicial::{enumerate_stratum, is_degenerate, Simplex, StratumKey};
use fk_morse::syntax::parse_chain;
use serde::Serialize;

/// Largest stratum the explorer will draw.
pub const MAX_NODES: u128 = 729;
/// Flow iterates shown before giving up.
pub const MAX_STEPS: usize = 200;
/// Longest words the homology scan accepts.
pub const MAX_SCAN_LENGTH: usize = 8;

pub fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Node {
    pub id: usize,
    pub dim: usize,
    pub text: String,
    pub pretty: String,
    pub degenerate: bool,
    pub critical: bool,
}

#[derive(Debug, Serialize)]
pub struct Edge {
    /// Upper cell.
    pub from: usize,
    /// Lower cell.
    pub to: usize,
    pub indices: Vec<usize>,
    pub regular: bool,
    pub matched: bool,
}

#[derive(Debug, Serialize)]
pub struct HasseView {
    pub lower: StratumKey,
    pub upper: StratumKey,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub pairs: usize,
}

pub fn hasse(dim: usize, length: usize) -> Result<HasseView, String> {
    let lower = StratumKey::new(dim, length);
    let upper = StratumKey::new(dim + 1, length);
    if upper.size() > MAX_NODES {
        return Err(format!("stratum {upper} has {} cells; the explorer draws at most {MAX_NODES}", upper.size()));
    }
    let flags = PairingFlags::default();
    let below: Vec<_> = match dim {
        0 => Vec::new(),
        d => pair_stratum(StratumKey::new(d - 1, length), &flags),
    };
    let here = pair_stratum(lower, &flags);
    let above = pair_stratum(upper, &flags);
    let matched_lower = |x: &Simplex| below.iter().any(|(_, t)| t == x) || here.iter().any(|(s, _)| s == x);
    let matched_upper = |x: &Simplex| here.iter().any(|(_, t)| t == x) || above.iter().any(|(s, _)| s == x);

    let mut nodes = Vec::new();
    let mut ids = BTreeMap::new();
    for (key, matched) in [(lower, &matched_lower as &dyn Fn(&Simplex) -> bool), (upper, &matched_upper)] {
        for x in enumerate_stratum(key) {
            let id = nodes.len();
            nodes.push(Node {
                id,
                dim: x.dim(),
                text: x.to_string(),
                pretty: x.pretty(),
                degenerate: is_degenerate(&x),
                critical: !matched(&x),
            });
            ids.insert(x, id);
        }
    }

    let mut edges = Vec::new();
    for tau in enumerate_stratum(upper) {
        let mut faces: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        for i in 0..=tau.dim() {
            let f = fk_morse::simplicial::face(&tau, i).map_err(|e| e.to_string())?;
            if f.len() == length {
                faces.entry(f).or_default().push(i);
            }
        }
        for (f, indices) in faces {
            edges.push(Edge {
                from: ids[&tau],
                to: ids[&f],
                regular: indices.len() == 1,
                matched: here.iter().any(|(s, t)| *s == f && *t == tau),
                indices,
            });
        }
    }
    Ok(HasseView {
        lower,
        upper,
        nodes,
        edges,
        pairs: here.len(),
    })
}

#[derive(Debug, Serialize)]
pub struct FlowTrace {
    pub input: String,
    pub dim: usize,
    pub scope: Scope,
    /// `c, Φc, Φ²c, …` ending at the first repeated value.
    pub iterates: Vec<String>,
    pub stable: String,
    pub converged: bool,
}

pub fn flow_trace(expr: &str) -> Result<FlowTrace, String> {
    let c = parse_chain(expr, None).map_err(|e| e.to_string())?;
    let max_length = c.max_length().unwrap_or(0);
    if max_length > 7 || c.dim() > 6 {
        return Err("the demo keeps chains to dimension ≤ 6 and word length ≤ 7".into());
    }
    let scope = Scope::new(c.dim() + 1, max_length);
    let (m, _) = build_matching(scope, PairingFlags::default()).map_err(|e| e.to_string())?;
    let ctx = FlowContext::new(m, ChainMode::Unnormalized).map_err(|e| e.to_string())?;
    let mut iterates = vec![c.pretty()];
    let mut cur = c.clone();
    let mut converged = false;
    for _ in 0..MAX_STEPS {
        let next = ctx.apply_flow(&cur).map_err(|e| e.to_string())?;
        if next == cur {
            converged = true;
            break;
        }
        iterates.push(next.pretty());
        cur = next;
    }
    Ok(FlowTrace {
        input: c.pretty(),
        dim: c.dim(),
        scope,
        iterates,
        stable: cur.pretty(),
        converged,
    })
}

pub fn homology_scan(degree: usize, from: usize, to: usize) -> Result<StabilityReport, String> {
    if to > MAX_SCAN_LENGTH || degree > 3 {
        return Err(format!("the demo scans degree ≤ 3 and lengths ≤ {MAX_SCAN_LENGTH}"));
    }
    let ctx = context_for(degree, to.max(from), PairingFlags::default(), ChainMode::Unnormalized)
        .map_err(|e| e.to_string())?;
    stability_scan(&ctx, degree, from..=to).map_err(|e| e.to_string())
}
