//! Acceptance run: every criterion at exact equality, one line each.
//!
//! Criteria whose printed claim is contradicted by a faithful computation
//! are listed in `KNOWN_DIVERGENCES`; they print FAIL with the observed
//! values. By default the run fails only on unexpected outcomes (including a
//! known divergence that starts passing). `cargo test --test acceptance --
//! --strict` fails on any FAIL line.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fk_morse::chain::{boundary, incidence, inner, Chain, ChainMode};
use fk_morse::flow::{FlowContext, NamedCell};
use fk_morse::homology::{homology, stability_scan};
use fk_morse::pairing::{
    build_matching, face_indices, regular_cofaces, validate_matching, CofaceScope, DegeneratePolicy, FaceScope,
    Matching, PairingFlags, Scope,
};
use fk_morse::simplicial::{
    degeneracy, enumerate_stratum, face, face_generator, is_degenerate, Generator, Simplex, StratumKey,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_f00d;

/// Criteria that cannot hold as printed under the default pairing.
const KNOWN_DIVERGENCES: &[&str] = &["8b", "9b"];

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn s(dim: usize, word: &[usize]) -> Simplex {
    Simplex::new(dim, word.iter().copied()).unwrap()
}

fn named(c: NamedCell) -> Simplex {
    c.expand().unwrap()
}

fn sigma(k: usize) -> Simplex {
    named(NamedCell::Sigma { k })
}

fn tau(k: usize) -> Simplex {
    named(NamedCell::Tau { k })
}

fn unit(x: &Simplex) -> Chain {
    Chain::unit(x.clone())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn context(scope: Scope, flags: PairingFlags) -> FlowContext {
    let (m, _) = build_matching(scope, flags).expect("matching builds");
    FlowContext::new(m, ChainMode::Unnormalized).expect("matching validates")
}

/// Decides every cell of dimension ≤ 6 and word length ≤ 6.
fn desk() -> &'static FlowContext {
    static CTX: OnceLock<FlowContext> = OnceLock::new();
    CTX.get_or_init(|| context(Scope::new(7, 6), PairingFlags::default()))
}

/// Same scope with degenerate cells allowed to pair; diagnostics only.
fn desk_allowed() -> &'static FlowContext {
    static CTX: OnceLock<FlowContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let flags = PairingFlags {
            degenerate_policy: DegeneratePolicy::Allowed,
            ..PairingFlags::default()
        };
        context(Scope::new(7, 6), flags)
    })
}

/// Critical 2-cells up to word length 7 with their Morse boundaries.
fn low() -> &'static FlowContext {
    static CTX: OnceLock<FlowContext> = OnceLock::new();
    CTX.get_or_init(|| context(Scope::new(3, 7), PairingFlags::default()))
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn fmt_entry(e: &Result<BigInt, String>) -> String {
    match e {
        Ok(v) => v.to_string(),
        Err(m) => format!("error({m})"),
    }
}

fn entry(ctx: &FlowContext, c: &Simplex, x: &Simplex) -> Result<BigInt, String> {
    ctx.morse_boundary_entry(c, x).map_err(|e| e.to_string())
}

// 1 ------------------------------------------------------------------------

fn c1_face_tables() -> Outcome {
    let mut checked = 0;
    // y = α_1^(1): both faces are the identity
    for i in 0..=1 {
        let f = face_generator(Generator::y(), i).map_err(|e| e.to_string())?;
        ensure(f.is_none(), || format!("d_{i}(y) = {f:?}, expected e"))?;
        checked += 1;
    }
    for n in 2..=6 {
        for k in 1..=n {
            for i in 0..=n {
                let expected: Option<(usize, usize)> = if k == 1 {
                    (i < n).then_some((n - 1, 1))
                } else if k == n {
                    (i >= 1).then_some((n - 1, n - 1))
                } else if i <= n - k {
                    Some((n - 1, k))
                } else {
                    Some((n - 1, k - 1))
                };
                let got = face_generator(Generator::new(n, k).unwrap(), i)
                    .map_err(|e| e.to_string())?
                    .map(|g| (g.dim(), g.index()));
                ensure(got == expected, || {
                    format!("d_{i}(α_{k}^({n})) = {got:?}, expected {expected:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generator faces for n ≤ 6"))
}

// 2 ------------------------------------------------------------------------

fn c2_simplicial_identities() -> Outcome {
    let mut checked = 0usize;
    for dim in 0..=5 {
        for len in 0..=4 {
            for x in enumerate_stratum(StratumKey::new(dim, len)) {
                let n = dim;
                let d = |y: &Simplex, i: usize| face(y, i).unwrap();
                let sd = |y: &Simplex, j: usize| degeneracy(y, j).unwrap();
                for j in 0..=n {
                    let sj = sd(&x, j);
                    ensure(d(&sj, j) == x && d(&sj, j + 1) == x, || format!("d s_{j} ≠ id at {x} (dim {n})"))?;
                    for i in 0..=j {
                        ensure(sd(&sj, i) == sd(&sd(&x, i), j + 1), || {
                            format!("s_{i} s_{j} ≠ s_{} s_{i} at {x} (dim {n})", j + 1)
                        })?;
                        checked += 1;
                    }
                    if n >= 1 {
                        for i in 0..j {
                            ensure(d(&sj, i) == sd(&d(&x, i), j - 1), || format!("d_{i} s_{j} at {x}"))?;
                        }
                        for i in j + 2..=n + 1 {
                            ensure(d(&sj, i) == sd(&d(&x, i - 1), j), || format!("d_{i} s_{j} at {x}"))?;
                        }
                    }
                    checked += 2;
                }
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            ensure(d(&d(&x, j), i) == d(&d(&x, i), j - 1), || {
                                format!("d_{i} d_{j} ≠ d_{} d_{i} at {x} (dim {n})", j - 1)
                            })?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} identity instances, dim ≤ 5, length ≤ 4"))
}

// 3 ------------------------------------------------------------------------

fn c3_boundary_squared() -> Outcome {
    let mode = ChainMode::Unnormalized;
    let mut exhaustive = 0;
    for dim in 2..=4 {
        for len in 0..=4 {
            for x in enumerate_stratum(StratumKey::new(dim, len)) {
                let dd = boundary(&boundary(&unit(&x), mode).unwrap(), mode).unwrap();
                ensure(dd.is_zero(), || format!("∂∂({x}) = {dd}"))?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random = 0;
    while random < 10_000 {
        let dim = rng.gen_range(2..=7);
        let len = rng.gen_range(0..=7);
        let x = Simplex::new(dim, (0..len).map(|_| rng.gen_range(1..=dim))).unwrap();
        let dd = boundary(&boundary(&unit(&x), mode).unwrap(), mode).unwrap();
        ensure(dd.is_zero(), || format!("∂∂({x}) = {dd}"))?;
        random += 1;
    }
    Ok(format!("{exhaustive} exhaustive + {random} seeded random words"))
}

// 4 ------------------------------------------------------------------------

fn printed_pairs() -> BTreeSet<(Simplex, Simplex)> {
    [
        (s(1, &[1, 1]), s(2, &[1, 2])),
        (s(1, &[1, 1, 1]), s(2, &[1, 1, 2])),
        (s(2, &[1, 2, 2]), s(3, &[1, 2, 3])),
        (s(2, &[2, 2, 1]), s(3, &[2, 3, 1])),
        (s(2, &[2, 1, 2]), s(3, &[2, 1, 3])),
    ]
    .into_iter()
    .collect()
}

const PRINTED_STRATA: [(usize, usize); 5] = [(0, 2), (1, 2), (2, 2), (1, 3), (2, 3)];

fn printed_strata_pairs(m: &Matching) -> BTreeSet<(Simplex, Simplex)> {
    PRINTED_STRATA
        .iter()
        .flat_map(|&(d, l)| m.pairs_in(StratumKey::new(d, l)))
        .collect()
}

fn c4_word_lengths_two_and_three() -> Outcome {
    let (m, report) = build_matching(Scope::new(4, 3), PairingFlags::default()).map_err(|e| e.to_string())?;
    let pairs = printed_strata_pairs(&m);
    ensure(pairs == printed_pairs(), || format!("pairs {pairs:?}"))?;

    let critical2: BTreeSet<Simplex> = [2, 3]
        .iter()
        .flat_map(|&l| report.critical_in(StratumKey::new(2, l)))
        .filter(|x| !is_degenerate(x))
        .collect();
    let expected2: BTreeSet<Simplex> = [s(2, &[2, 1]), s(2, &[1, 2, 1]), s(2, &[2, 1, 1])].into_iter().collect();
    ensure(critical2 == expected2, || format!("nondegenerate critical 2-cells {critical2:?}"))?;

    for x in [s(3, &[3, 2, 2]), s(3, &[3, 2, 1])] {
        ensure(m.is_critical(&x), || format!("{x} is matched"))?;
    }
    let critical3: Vec<String> = report
        .critical_in(StratumKey::new(3, 3))
        .iter()
        .map(|x| format!("{}{}", x, if is_degenerate(x) { "*" } else { "" }))
        .collect();
    Ok(format!(
        "5 pairs and critical 2-cells exact; a3.a2.a2, a3.a2.a1 critical (all critical 3-cells of length 3, * degenerate: {})",
        critical3.join(" ")
    ))
}

// 5 ------------------------------------------------------------------------

fn c5_sigma_tau_critical() -> Outcome {
    let ctx = desk();
    for k in 2..=6 {
        for x in [sigma(k), tau(k)] {
            ensure(ctx.is_critical(&x).map_err(|e| e.to_string())?, || format!("{x} is matched"))?;
        }
    }
    let mut shifts = Vec::new();
    for k in 2..=6 {
        let sk = sigma(k);
        for sidx in 1..=k {
            let beta = named(NamedCell::Beta { k, s: sidx });
            let idx = face_indices(&beta, &sk);
            ensure(idx == vec![k - sidx + 1, k - sidx + 2], || {
                format!("σ_{k} occurs in β_{sidx} at {idx:?}")
            })?;
        }
        shifts.push(format!("k={k}"));
        let cofaces = regular_cofaces(&tau(k));
        ensure(cofaces.len() == 2, || {
            format!("τ_{k} has regular same-length cofaces {:?}", cofaces.iter().map(|c| c.0.to_string()).collect::<Vec<_>>())
        })?;
    }
    Ok("σ_k, τ_k critical for k = 2..6; σ_k = d_{k−s+1}β_s = d_{k−s+2}β_s exactly (printed indices k−s−1, k−s−2 are off by two); τ_k has exactly 2 regular same-length cofaces".into())
}

// 6 ------------------------------------------------------------------------

fn c6_validator() -> Outcome {
    let scope = Scope::new(5, 5);
    let (m, _) = build_matching(scope, PairingFlags::default()).map_err(|e| e.to_string())?;
    let v = validate_matching(&m.pairs(), scope).map_err(|e| e.to_string())?;
    ensure(v.valid, || format!("violations {:?}", v.violations))?;
    Ok(format!("{} pairs over {} strata: regular, injective, acyclic", v.pairs_checked, v.strata_checked))
}

// 7 ------------------------------------------------------------------------

fn c7_powers_of_y() -> Outcome {
    let ctx = low();
    for r in 1..=7 {
        let stable = ctx.stable(&unit(&Simplex::y_power(r))).map_err(|e| e.to_string())?;
        let expected = Chain::term(r as i64, Simplex::y_power(1));
        ensure(stable == expected, || format!("Φ^∞(y^{r}) = {stable}"))?;
    }
    for r in 1..=6 {
        let once = ctx.apply_flow(&unit(&Simplex::y_power(r + 1))).map_err(|e| e.to_string())?;
        let expected = &unit(&Simplex::y_power(r)) + &unit(&Simplex::y_power(1));
        ensure(once == expected, || format!("Φ(y^{}) = {once}", r + 1))?;
    }
    Ok("Φ^∞(y^r) = r·y for r ≤ 7; Φ(y^{r+1}) = y^r + y".into())
}

// 8 ------------------------------------------------------------------------

fn c8a_sigma_stable() -> Outcome {
    let ctx = desk();
    for r in 2..=6 {
        let st = ctx.stable(&unit(&sigma(r))).map_err(|e| e.to_string())?;
        let expected = &unit(&sigma(r)) - &unit(&named(NamedCell::SigmaTilde { r }));
        ensure(st == expected, || format!("Φ^∞(σ_{r}) = {st}"))?;
    }
    Ok("Φ^∞(σ_r) = σ_r − σ̃_r for r = 2..6".into())
}

fn tau_tilde_note() -> String {
    (3..=6)
        .map(|r| {
            let t = named(NamedCell::TauTilde { r });
            format!("τ̃_{r}={t}{}", if is_degenerate(&t) { " (degenerate)" } else { "" })
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn c8b_tau_stable() -> Outcome {
    let ctx = desk();
    let mut bad = Vec::new();
    for r in 3..=6 {
        let st = ctx.stable(&unit(&tau(r))).map_err(|e| e.to_string())?;
        let expected = &unit(&tau(r)) - &unit(&named(NamedCell::TauTilde { r }));
        if st != expected {
            bad.push(format!("Φ^∞(τ_{r}) = {st}"));
        }
    }
    if bad.is_empty() {
        return Ok("Φ^∞(τ_r) = τ_r − τ̃_r for r = 3..6".into());
    }
    let allowed: Vec<String> = (3..=6)
        .map(|r| match desk_allowed().stable(&unit(&tau(r))) {
            Ok(c) => format!("τ_{r} ↦ {c}"),
            Err(e) => format!("τ_{r} ↦ error({e})"),
        })
        .collect();
    Err(format!(
        "{}; {} and degenerate cells stay critical, so V never reaches it. With degenerate pairing allowed: {}",
        bad.join("; "),
        tau_tilde_note(),
        allowed.join("; ")
    ))
}

// 9 ------------------------------------------------------------------------

fn c9a_boundary_entries() -> Outcome {
    let ctx = desk();
    let y = Simplex::y_power(1);
    let mut seen = Vec::new();
    let mut check = |c: &Simplex, x: &Simplex, want: i64, label: String| -> Result<(), String> {
        let got = entry(ctx, c, x);
        ensure(got.as_ref().ok() == Some(&int(want)), || format!("{label} = {}, expected {want}", fmt_entry(&got)))?;
        seen.push(label);
        Ok(())
    };
    for k in 1..=2 {
        check(&tau(2 * k + 1), &sigma(2 * k), 0, format!("⟨∂̃τ_{},σ_{}⟩", 2 * k + 1, 2 * k))?;
    }
    for k in 1..=3 {
        check(&sigma(2 * k), &tau(2 * k - 1), 0, format!("⟨∂̃σ_{},τ_{}⟩", 2 * k, 2 * k - 1))?;
    }
    for k in 1..=2 {
        check(&sigma(2 * k + 1), &sigma(2 * k), -1, format!("⟨∂̃σ_{},σ_{}⟩", 2 * k + 1, 2 * k))?;
    }
    for k in 2..=3 {
        check(&sigma(2 * k), &sigma(2 * k - 1), 1, format!("⟨∂̃σ_{},σ_{}⟩", 2 * k, 2 * k - 1))?;
    }
    // the incidence bookkeeping behind those values
    for r in 2..=5 {
        let plain = incidence(&sigma(r + 1), &sigma(r)).unwrap();
        let tilde = incidence(&named(NamedCell::SigmaTilde { r: r + 1 }), &sigma(r)).unwrap();
        let want = if r % 2 == 1 { 2 } else { 0 };
        ensure(plain == want && tilde == 1, || {
            format!("[σ_{}:σ_{r}] = {plain}, [σ̃_{}:σ_{r}] = {tilde}", r + 1, r + 1)
        })?;
    }

    // ⟨∂̃σ_2, y⟩ = 2 − 2
    let st = ctx.stable(&unit(&sigma(2))).map_err(|e| e.to_string())?;
    let d_sigma = inner(&boundary(&unit(&sigma(2)), ChainMode::Unnormalized).unwrap(), &y).unwrap();
    let d_tilde = inner(
        &boundary(&unit(&named(NamedCell::SigmaTilde { r: 2 })), ChainMode::Unnormalized).unwrap(),
        &y,
    )
    .unwrap();
    ensure(d_sigma == int(2) && d_tilde == int(2), || format!("⟨∂σ_2,y⟩ = {d_sigma}, ⟨∂σ̃_2,y⟩ = {d_tilde}"))?;
    let via = inner(&boundary(&st, ChainMode::Unnormalized).unwrap(), &y).unwrap();
    ensure(via == int(0), || format!("⟨∂Φ^∞σ_2,y⟩ = {via}"))?;
    check(&sigma(2), &y, 0, "⟨∂̃σ_2,y⟩".into())?;

    // the two word-length-3 critical 2-simplices
    for c in [s(2, &[2, 1, 1]), s(2, &[1, 2, 1])] {
        let b = boundary(&unit(&c), ChainMode::Unnormalized).unwrap();
        let expected = &(&unit(&Simplex::y_power(2)) - &unit(&Simplex::y_power(3))) + &unit(&y);
        ensure(b == expected, || format!("∂({c}) = {b}"))?;
        check(&c, &y, 0, format!("⟨∂̃{c},y⟩"))?;
    }
    Ok(format!("{} entries exact, incl. 2 − 2 = 0 and the printed 2y − 3y + y", seen.len()))
}

fn c9b_tau_chain() -> Outcome {
    let ctx = desk();
    let mut lines = Vec::new();
    let mut failed = false;
    for r in 3..=5 {
        let got = entry(ctx, &tau(r + 1), &tau(r));
        let inc = incidence(&tau(r + 1), &tau(r)).unwrap();
        let inc_tilde = incidence(&named(NamedCell::TauTilde { r: r + 1 }), &tau(r)).unwrap();
        failed |= got.as_ref().ok() != Some(&int(0));
        lines.push(format!("⟨∂̃τ_{},τ_{r}⟩ = {} ([τ_{}:τ_{r}] = {inc}, [τ̃_{}:τ_{r}] = {inc_tilde})", r + 1, fmt_entry(&got), r + 1, r + 1));
    }
    if !failed {
        return Ok(lines.join("; "));
    }
    let allowed: Vec<String> = (3..=5)
        .map(|r| fmt_entry(&entry(desk_allowed(), &tau(r + 1), &tau(r))).to_string())
        .collect();
    Err(format!(
        "{}; the −1 from τ̃_{{r+1}} never arrives because τ̃_{{r+1}} is degenerate and critical. With degenerate pairing allowed the entries are [{}]",
        lines.join("; "),
        allowed.join(", ")
    ))
}

// 10 -----------------------------------------------------------------------

fn c10_critical_two_cells() -> Outcome {
    let ctx = low();
    let y = Simplex::y_power(1);
    let mut count = 0;
    for c in ctx.matching().critical_cells(2, 7).map_err(|e| e.to_string())? {
        let n = c.len();
        let odd = c.word().iter().filter(|&&k| k == 1).count();
        let even = n - odd;
        let expected = &(&unit(&Simplex::y_power(odd)) - &unit(&Simplex::y_power(n))) + &unit(&Simplex::y_power(even));
        let b = boundary(&unit(&c), ChainMode::Unnormalized).unwrap();
        ensure(b == expected, || format!("∂({c}) = {b}"))?;
        let got = entry(ctx, &c, &y);
        ensure(got.as_ref().ok() == Some(&int(0)), || format!("⟨∂̃{c},y⟩ = {}", fmt_entry(&got)))?;
        count += 1;
    }
    Ok(format!("{count} critical 2-simplices of length ≤ 7"))
}

// 11 -----------------------------------------------------------------------

fn c11_homology() -> Outcome {
    let ctx = low();
    let mut parts = Vec::new();
    for (degree, l0) in [(0, 2), (1, 2)] {
        let report = stability_scan(ctx, degree, l0..=7).map_err(|e| e.to_string())?;
        for e in &report.entries {
            ensure(e.betti == 1 && e.torsion.is_empty(), || {
                format!("H_{degree} at L = {}: betti {}, torsion {:?}", e.scope.max_length, e.betti, e.torsion)
            })?;
        }
        ensure(report.entries.len() == 6 && report.stable_from == Some(l0), || {
            format!("H_{degree} scan stable from {:?}", report.stable_from)
        })?;
        parts.push(format!("H_{degree} = Z for L = {l0}..7"));
    }
    ensure(homology(ctx, 1, 7).map_err(|e| e.to_string())?.betti == 1, || "H_1 at L = 7".into())?;
    Ok(format!("{}; stable from L = 2", parts.join(", ")))
}

// 12 -----------------------------------------------------------------------

fn fact5(ctx: &FlowContext, c: &Simplex) -> Result<(), String> {
    let mode = ctx.mode();
    let lhs = ctx.stable(&boundary(&unit(c), mode).unwrap()).map_err(|e| e.to_string())?;
    let rhs = boundary(&ctx.stable(&unit(c)).map_err(|e| e.to_string())?, mode).unwrap();
    ensure(lhs == rhs, || format!("Φ^∞∂{c} = {lhs} but ∂Φ^∞{c} = {rhs}"))
}

fn c12_fact5() -> Outcome {
    let mut count = 0;
    for r in 2..=6 {
        fact5(desk(), &sigma(r))?;
        count += 1;
    }
    for r in 3..=6 {
        fact5(desk(), &tau(r))?;
        count += 1;
    }
    for c in low().matching().critical_cells(2, 7).map_err(|e| e.to_string())? {
        fact5(low(), &c)?;
        count += 1;
    }
    Ok(format!("Φ^∞∂c = ∂Φ^∞c as whole chains for {count} critical cells"))
}

// flag reading -----------------------------------------------------------

fn all_flag_combinations() -> Vec<PairingFlags> {
    let mut out = Vec::new();
    for face_scope in [FaceScope::All, FaceScope::Regular] {
        for coface_scope in [CofaceScope::Regular, CofaceScope::All] {
            for degenerate_policy in [DegeneratePolicy::Critical, DegeneratePolicy::Allowed] {
                for degenerate_cofaces_block in [false, true] {
                    out.push(PairingFlags {
                        face_scope,
                        coface_scope,
                        degenerate_policy,
                        degenerate_cofaces_block,
                    });
                }
            }
        }
    }
    out
}

fn cq_flag_reading() -> Outcome {
    let small = Scope::new(4, 3);
    let consistent: Vec<PairingFlags> = all_flag_combinations()
        .into_iter()
        .filter(|f| {
            let (m, _) = build_matching(small, *f).unwrap();
            printed_strata_pairs(&m) == printed_pairs()
        })
        .collect();
    ensure(consistent.contains(&PairingFlags::default()), || "default flags disagree with the printed pairs".into())?;
    let big = Scope::new(6, 5);
    let reference = build_matching(big, PairingFlags::default()).unwrap().0.pairs();
    for f in &consistent {
        let pairs = build_matching(big, *f).unwrap().0.pairs();
        ensure(pairs == reference, || format!("consistent flags {f:?} give a different matching"))?;
    }
    Ok(format!(
        "default consistent; {} of 16 flag combinations reproduce the printed pairs, all yielding the same {} pairs on scope (6,5)",
        consistent.len(),
        reference.len()
    ))
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    let criteria = [
        Criterion { id: "1", title: "generator face tables", budget: Duration::from_secs(1), run: c1_face_tables },
        Criterion { id: "2", title: "simplicial identities", budget: Duration::from_secs(30), run: c2_simplicial_identities },
        Criterion { id: "3", title: "boundary squared is zero", budget: Duration::from_secs(60), run: c3_boundary_squared },
        Criterion { id: "4", title: "word lengths 2 and 3", budget: Duration::from_secs(1), run: c4_word_lengths_two_and_three },
        Criterion { id: "5", title: "sigma_k and tau_k critical", budget: Duration::from_secs(120), run: c5_sigma_tau_critical },
        Criterion { id: "6", title: "matching validates on (5,5)", budget: Duration::from_secs(120), run: c6_validator },
        Criterion { id: "7", title: "stable powers of y", budget: Duration::from_secs(10), run: c7_powers_of_y },
        Criterion { id: "8a", title: "stable sigma chains", budget: Duration::from_secs(120), run: c8a_sigma_stable },
        Criterion { id: "8b", title: "stable tau chains", budget: Duration::from_secs(120), run: c8b_tau_stable },
        Criterion { id: "9a", title: "Morse boundary entries", budget: Duration::from_secs(120), run: c9a_boundary_entries },
        Criterion { id: "9b", title: "tau_{r+1} to tau_r entries", budget: Duration::from_secs(120), run: c9b_tau_chain },
        Criterion { id: "10", title: "critical 2-simplices", budget: Duration::from_secs(60), run: c10_critical_two_cells },
        Criterion { id: "11", title: "H_0 and H_1", budget: Duration::from_secs(120), run: c11_homology },
        Criterion { id: "12", title: "fact-5 consistency", budget: Duration::from_secs(120), run: c12_fact5 },
        Criterion { id: "Q", title: "pairing flag reading", budget: Duration::from_secs(120), run: cq_flag_reading },
    ];

    let mut unexpected = Vec::new();
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over the {:?} budget", c.budget)),
            other => other,
        };
        let known = KNOWN_DIVERGENCES.contains(&c.id);
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let note = if known && outcome.is_err() { " [known divergence]" } else { "" };
        println!("{tag} {:>3}  {:<30} {:>9.3}s{note}  {detail}", c.id, c.title, elapsed.as_secs_f64());
        if outcome.is_err() {
            failures += 1;
        }
        if outcome.is_err() != known {
            unexpected.push(c.id);
        }
    }
    println!(
        "{} criteria, {} passed, {} failed ({} known divergences)",
        criteria.len(),
        criteria.len() - failures,
        failures,
        KNOWN_DIVERGENCES.len()
    );
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
