//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line reaches stdout. The large
//! quartic oracle at q = 5 runs only with `PVSFT_SLOW=1`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pvsft_core::census::{
    character_histograms, count_in_subspace, full_census, oracle_ft_matrix, CensusConfig, SubspaceSpec,
};
use pvsft_core::counts::{count_table, spanning_family};
use pvsft_core::exactla::BigRational;
use pvsft_core::exec::ExecConfig;
use pvsft_core::ffield::PrimeField;
use pvsft_core::ftsolver::{
    ft_apply, l1_norm, phip_expected, phip_vector, q_pow, quadratic_twist_check, quadratic_twist_pointwise,
    solve_ft_matrix, subspace_identity_check, sym22_remark_check, verify_lemma, FTMatrix, OrbitFunction, Provider,
};
use pvsft_core::paperdata::{expected_ft_matrix, expected_psi_hat, l1_norm_psi_hat, singular_indicator};
use pvsft_core::reps::{GroupElement, RepKind, Space};
use pvsft_core::symbolic::{compare_paper, interpolate, verify_poly_lemma};

type Outcome = Result<String, String>;

/// Primes of the theorem regression.
fn theorem_primes(kind: RepKind) -> &'static [u64] {
    match kind {
        RepKind::Sym32 => &[5, 7, 11, 13],
        _ => &[3, 5, 7],
    }
}

/// Primes of the oracle comparison (without the slow quartic case).
fn oracle_primes(kind: RepKind) -> &'static [u64] {
    match kind {
        RepKind::Sym32 => &[5, 7],
        RepKind::Pair23 => &[3],
        _ => &[3, 5, 7],
    }
}

fn oracle_limit(kind: RepKind) -> Duration {
    Duration::from_secs(match kind {
        RepKind::Sym32 => 1,
        RepKind::Pair23 => 60,
        _ => 10,
    })
}

fn formula(kind: RepKind, q: u64) -> Result<FTMatrix, String> {
    solve_ft_matrix(kind, q, &Provider::Formula).map_err(|e| format!("{kind} q={q}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn theorem_regression(matrices: &mut Vec<FTMatrix>) -> Outcome {
    let mut cases = 0;
    let mut slowest = Duration::ZERO;
    for kind in RepKind::ALL {
        for &q in theorem_primes(kind) {
            let t = Instant::now();
            let m = formula(kind, q)?;
            let elapsed = t.elapsed();
            let want = expected_ft_matrix(kind, q).map_err(|e| e.to_string())?;
            ensure(m == want, || format!("{kind} q={q} differs from the theorem"))?;
            ensure(elapsed < Duration::from_secs(5), || {
                format!("{kind} q={q} took {}", secs(elapsed))
            })?;
            slowest = slowest.max(elapsed);
            cases += 1;
            matrices.push(m);
        }
    }
    Ok(format!("{cases} cases exact, slowest {}", secs(slowest)))
}

fn oracle_case(kind: RepKind, q: u64, cfg: &CensusConfig) -> Result<(FTMatrix, Duration), String> {
    let space = Space::new(kind, q).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let oracle = oracle_ft_matrix(&space, cfg).map_err(|e| format!("{kind} q={q}: {e}"))?;
    let elapsed = t.elapsed();
    let m = formula(kind, q)?;
    ensure(oracle == m.matrix, || format!("{kind} q={q}: oracle differs"))?;
    Ok((
        FTMatrix {
            rep: kind,
            q,
            matrix: oracle,
        },
        elapsed,
    ))
}

fn oracle_equivalence(matrices: &mut Vec<FTMatrix>) -> Outcome {
    let cfg = CensusConfig::default();
    let mut notes = Vec::new();
    for kind in RepKind::ALL {
        let mut slowest = Duration::ZERO;
        for &q in oracle_primes(kind) {
            let (m, elapsed) = oracle_case(kind, q, &cfg)?;
            ensure(elapsed < oracle_limit(kind), || {
                format!(
                    "{kind} q={q} took {} (limit {})",
                    secs(elapsed),
                    secs(oracle_limit(kind))
                )
            })?;
            slowest = slowest.max(elapsed);
            matrices.push(m);
        }
        notes.push(format!("{kind} {}", secs(slowest)));
    }
    Ok(notes.join(", "))
}

fn slow_quartic_oracle() -> Outcome {
    let t = Instant::now();
    let (_, elapsed) = oracle_case(RepKind::Pair23, 5, &CensusConfig::default())?;
    ensure(elapsed < Duration::from_secs(30 * 60), || {
        format!("took {}", secs(t.elapsed()))
    })?;
    Ok(format!("5^12 elements in {}", secs(elapsed)))
}

fn lemma_battery(matrices: &[FTMatrix], polys: &[pvsft_core::symbolic::PolyMatrix]) -> Outcome {
    for m in matrices {
        let r = verify_lemma(m);
        ensure(r.ok(), || format!("{} q={}: {r:?}", m.rep, m.q))?;
    }
    for pm in polys {
        let r = verify_poly_lemma(pm);
        ensure(r.ok(), || format!("{} class {}: {r:?}", pm.rep, pm.class))?;
    }
    Ok(format!(
        "{} matrices, {} polynomial matrices",
        matrices.len(),
        polys.len()
    ))
}

fn census_vs_formulas() -> Outcome {
    let cfg = CensusConfig::default();
    let mut n = 0;
    for kind in RepKind::ALL {
        for &p in oracle_primes(kind) {
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            let c = full_census(&s, &cfg).map_err(|e| e.to_string())?;
            let want: Vec<BigRational> = kind.descriptor().sizes.iter().map(|x| x.eval_int(p as i64)).collect();
            ensure(c.to_rationals() == want, || {
                format!("{kind} p={p}: census {:?}", c.counts)
            })?;
            ensure(c.total() == (p as u128).pow(kind.dim() as u32), || {
                format!("{kind} p={p}: total")
            })?;
            if kind == RepKind::Pair23 && p == 3 {
                let i = kind.descriptor().label_index("1111").map_err(|e| e.to_string())?;
                ensure(c.total() == 531_441 && c.counts[i] == 11_232, || {
                    "quartic q=3 totals".into()
                })?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} censuses match the size polynomials"))
}

fn corollaries() -> Outcome {
    // (a) singular-set transforms
    for kind in [RepKind::Sym32, RepKind::Pair23] {
        for &q in theorem_primes(kind) {
            let m = formula(kind, q)?;
            let got = ft_apply(&m, &singular_indicator(kind).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let want = expected_psi_hat(kind).map_err(|e| e.to_string())?.eval(q);
            ensure(got == want, || format!("(a) {kind} q={q}"))?;
        }
    }
    // (b), (c)
    for &q in theorem_primes(RepKind::Sym32) {
        let m = formula(RepKind::Sym32, q)?;
        let w = ft_apply(&m, &phip_vector(q)).map_err(|e| e.to_string())?;
        ensure(w == phip_expected(q), || format!("(b) q={q}"))?;
        let twist = quadratic_twist_check(&m).map_err(|e| e.to_string())?;
        ensure(twist, || format!("(c) eigenvector q={q}"))?;
    }
    let t = Instant::now();
    for p in [5u64, 7] {
        ensure(quadratic_twist_pointwise(p).map_err(|e| e.to_string())?, || {
            format!("(c) pointwise p={p}")
        })?;
    }
    let pointwise = t.elapsed();
    ensure(pointwise < Duration::from_secs(10), || {
        format!("(c) pointwise took {}", secs(pointwise))
    })?;
    // (d) remark for binary quadratics, nonzero on the singular orbits (0), (1^2)
    for q in [3u64, 5, 7] {
        let m = formula(RepKind::Sym22, q)?;
        ensure(sym22_remark_check(&m).map_err(|e| e.to_string())?, || {
            format!("(d) q={q}")
        })?;
        let f = OrbitFunction::from_i64(RepKind::Sym22, &[0, 0, 1, -1]).map_err(|e| e.to_string())?;
        let out = ft_apply(&m, &f).map_err(|e| e.to_string())?;
        ensure(!out.coeffs[0].is_zero() && !out.coeffs[1].is_zero(), || {
            format!("(d) q={q} vanishes")
        })?;
    }
    Ok(format!("(a)-(d) hold, pointwise twist in {}", secs(pointwise)))
}

fn symbolic_reconstruction(polys: &mut Vec<pvsft_core::symbolic::PolyMatrix>) -> Outcome {
    let mut notes = Vec::new();
    for kind in RepKind::ALL {
        let t = Instant::now();
        let pms = interpolate(kind, &ExecConfig::default()).map_err(|e| format!("{kind}: {e}"))?;
        let elapsed = t.elapsed();
        for pm in &pms {
            let diff = compare_paper(pm).map_err(|e| e.to_string())?;
            ensure(diff.is_empty(), || {
                format!("{kind} class {}: {} entries differ", pm.class, diff.len())
            })?;
            ensure(pm.max_degree() <= kind.dim(), || {
                format!("{kind}: degree {}", pm.max_degree())
            })?;
        }
        if kind == RepKind::Pair23 {
            ensure(elapsed < Duration::from_secs(300), || {
                format!("quartic took {}", secs(elapsed))
            })?;
        }
        notes.push(format!("{kind} {}", secs(elapsed)));
        polys.extend(pms);
    }
    Ok(notes.join(", "))
}

fn l1_bound() -> Outcome {
    let kind = RepKind::Pair23;
    let four = BigRational::from_integer(4.into());
    let mut ratios: Vec<(u64, BigRational)> = Vec::new();
    for q in [3u64, 5, 7, 11, 13] {
        // the solver's transform and the case list must give the same norm
        let m = formula(kind, q)?;
        let psi_hat = ft_apply(&m, &singular_indicator(kind).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let direct = l1_norm(kind, q, &psi_hat);
        ensure(direct == l1_norm_psi_hat(q), || format!("q={q}: norms disagree"))?;
        ratios.push((q, direct * q_pow(q, -4)));
    }
    let listing = ratios
        .iter()
        .map(|(q, r)| format!("q={q}: {:.4}", ratio_f64(r)))
        .collect::<Vec<_>>()
        .join(", ");
    let bounded = ratios.iter().all(|(_, r)| *r <= four);
    let rises: Vec<String> = ratios
        .windows(2)
        .filter(|w| w[1].1 > w[0].1)
        .map(|w| format!("{}->{}", w[0].0, w[1].0))
        .collect();
    ensure(bounded && rises.is_empty(), || {
        format!(
            "L1/q^4 {listing}; bounded by 4: {bounded}; increases at {}",
            if rises.is_empty() {
                "none".into()
            } else {
                rises.join(", ")
            }
        )
    })?;
    Ok(format!("L1/q^4 {listing}"))
}

fn ratio_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn property_primes(kind: RepKind) -> &'static [u64] {
    match kind {
        RepKind::Sym32 => &[5],
        _ => &[3],
    }
}

fn random_vector(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..f.p())).collect()
}

fn g_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    let mut n = 0;
    for kind in RepKind::ALL {
        for &p in property_primes(kind) {
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            for &label in &kind.descriptor().labels {
                let x = s.representative(label).map_err(|e| e.to_string())?;
                for _ in 0..1000 {
                    let g = GroupElement::random(kind, s.field(), &mut rng);
                    let y = s.act(&g, &x).map_err(|e| e.to_string())?;
                    ensure(s.classify(&y).ok() == Some(label), || {
                        format!("{kind} p={p} {label}: {y:?}")
                    })?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} group translates keep their orbit"))
}

fn pairing_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa2);
    for kind in RepKind::ALL {
        for &p in property_primes(kind) {
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            for _ in 0..1000 {
                let g = GroupElement::random(kind, s.field(), &mut rng);
                let gt = g.inverse_transpose(s.field()).map_err(|e| e.to_string())?;
                let x = random_vector(s.field(), s.dim(), &mut rng);
                let y = random_vector(s.field(), s.dim(), &mut rng);
                let lhs = s
                    .bilinear(
                        &s.act(&g, &x).map_err(|e| e.to_string())?,
                        &s.act(&gt, &y).map_err(|e| e.to_string())?,
                    )
                    .map_err(|e| e.to_string())?;
                let rhs = s.bilinear(&x, &y).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{kind} p={p}: x={x:?} y={y:?}"))?;
            }
        }
    }
    Ok("1000 triples per rep".into())
}

/// Binary form with coefficients `c_k` of `u^{d−k} v^k`, evaluated at `(u, v)`.
fn eval_binary(f: &PrimeField, c: &[u32], u: u32, v: u32) -> u32 {
    let d = c.len() - 1;
    c.iter().enumerate().fold(0, |acc, (k, &ck)| {
        let term = f.mul(ck, f.mul(f.pow(u, (d - k) as u64), f.pow(v, k as u64)));
        f.add(acc, term)
    })
}

/// `r_{g·x}(u, v) = det(g₂)² · r_x(u g₀₀ + v g₁₀, u g₀₁ + v g₁₁)`, compared as
/// functions on `F_p²` (degree < p, so this fixes the coefficients).
fn resolvent_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa3);
    let mut n = 0;
    for kind in [RepKind::Pair22, RepKind::Pair23] {
        for p in [5u64, 7] {
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            let f = s.field().clone();
            for _ in 0..200 {
                let g = GroupElement::random(kind, &f, &mut rng);
                let x = random_vector(&f, s.dim(), &mut rng);
                let rx = s.resolvent(&x).map_err(|e| e.to_string())?;
                let rgx = s
                    .resolvent(&s.act(&g, &x).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let g1 = &g.factors[0];
                let d2 = g.factors[1].det(&f);
                let scale = f.mul(d2, d2);
                for u in 0..p as u32 {
                    for v in 0..p as u32 {
                        let u2 = f.add(f.mul(u, g1.at(0, 0)), f.mul(v, g1.at(1, 0)));
                        let v2 = f.add(f.mul(u, g1.at(0, 1)), f.mul(v, g1.at(1, 1)));
                        let want = f.mul(scale, eval_binary(&f, &rx, u2, v2));
                        ensure(eval_binary(&f, &rgx, u, v) == want, || format!("{kind} p={p}: x={x:?}"))?;
                    }
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} random (g, x)"))
}

fn histogram_uniformity() -> Outcome {
    let cfg = CensusConfig::default();
    let mut n = 0;
    for kind in RepKind::ALL {
        for &p in oracle_primes(kind) {
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            let reps = s.representatives().map_err(|e| e.to_string())?;
            for h in character_histograms(&s, &reps, &cfg).map_err(|e| e.to_string())? {
                ensure(h.is_uniform(), || format!("{kind} p={p} y={:?}", h.y))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} representative histograms uniform"))
}

fn random_mask_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa5);
    let cfg = CensusConfig::default();
    for kind in RepKind::ALL {
        let p = property_primes(kind)[0];
        let s = Space::new(kind, p).map_err(|e| e.to_string())?;
        let m = formula(kind, p)?;
        for _ in 0..50 {
            let mask: Vec<bool> = (0..kind.dim()).map(|_| rng.gen_bool(0.5)).collect();
            let ok = subspace_identity_check(&s, &SubspaceSpec::Mask(mask.clone()), &m, &cfg)
                .map_err(|e| format!("{kind}: {e}"))?;
            ensure(ok, || format!("{kind} p={p} mask {mask:?}"))?;
        }
    }
    Ok("50 masks per rep".into())
}

fn counts_vs_enumeration() -> Outcome {
    let cfg = CensusConfig::default();
    let mut n = 0;
    for kind in RepKind::ALL {
        let table = count_table(kind);
        for p in [3u64, 5, 7] {
            if !kind.is_valid_prime(p) {
                continue;
            }
            let s = Space::new(kind, p).map_err(|e| e.to_string())?;
            for member in spanning_family(kind).members {
                let e = table.entry(&member.id).map_err(|e| e.to_string())?;
                if e.dim > 8 {
                    continue;
                }
                let c = count_in_subspace(&s, &SubspaceSpec::Mask(e.mask_bits()), &cfg).map_err(|e| e.to_string())?;
                let want = table.evaluate(&e.id, p).map_err(|e| e.to_string())?;
                ensure(c.to_rationals() == want, || format!("{kind} {} p={p}", e.id))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} family members"))
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: &str, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = secs(t.elapsed());
        match outcome {
            Ok(detail) => println!("PASS {id} {name} [{elapsed}]: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {id} {name} [{elapsed}]: {detail}");
            }
        }
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar harness queries
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let slow = std::env::var("PVSFT_SLOW").is_ok_and(|v| v == "1");
    let mut r = Runner { failures: 0 };
    let mut matrices = Vec::new();
    let mut polys = Vec::new();

    r.run("1", "theorem regression", || theorem_regression(&mut matrices));
    r.run("2", "oracle equivalence", || oracle_equivalence(&mut matrices));
    if slow {
        r.run("2-slow", "quartic oracle at q=5", slow_quartic_oracle);
    } else {
        println!("SKIP 2-slow quartic oracle at q=5: set PVSFT_SLOW=1");
    }
    r.run("6", "symbolic reconstruction", || symbolic_reconstruction(&mut polys));
    r.run("3", "lemma battery", || lemma_battery(&matrices, &polys));
    r.run("4", "census vs formulas", census_vs_formulas);
    r.run("5", "corollary reproduction", corollaries);
    r.run("7", "L1 bound", l1_bound);
    r.run("8a", "classifier G-invariance", g_invariance);
    r.run("8b", "pairing invariance", pairing_invariance);
    r.run("8c", "resolvent equivariance", resolvent_equivariance);
    r.run("8d", "character histogram uniformity", histogram_uniformity);
    r.run("8e", "subspace identity on random masks", random_mask_identity);
    r.run("8f", "closed-form counts vs enumeration", counts_vs_enumeration);

    if r.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", r.failures);
        ExitCode::FAILURE
    }
}
