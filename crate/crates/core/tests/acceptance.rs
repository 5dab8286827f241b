//! Acceptance suite. Runs every criterion in sequence, prints one PASS/FAIL
//! line per criterion and fails if any criterion fails.
//!
//! Run with `cargo test -p ptchain --test acceptance -- --nocapture`.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use ptchain::lattice::pt_transform;
use ptchain::spectral::count_zero_modes_in;
use ptchain::{
    classify_states, critical_gamma, eigen_decompose, eigenvalues, infinity_norm, occupation_profile, zero_mode_map,
    Complex64, DenseComplexMatrix, GainLoss, ModelKind, ModelSpec, PhaseMap, PotentialKind, PtPhase, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Complete-breaking gamma of the N=200, theta=0.9pi, Delta=0.3 SSH chain
/// with staggered gain/loss. Frozen from the independent Sturm-bisection
/// oracle (top of the Hermitian band, since E^2 = E0^2 - gamma^2) and
/// confirmed by the 1e-3 real-count scan in criterion 5.
const GOLDEN_GAMMA_C: f64 = 1.999776237034973;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn values(spec: &ModelSpec) -> Vec<Complex64> {
    eigenvalues(&spec.build().expect("valid model")).expect("solver")
}

fn ssh200(theta: f64, potential: GainLoss) -> ModelSpec {
    ModelSpec::ssh(200, 1.0, 0.3, theta, potential)
}

fn kitaev(n: usize, mu: f64, potential: GainLoss) -> ModelSpec {
    ModelSpec::kitaev(n, 1.0, 1.0, mu, potential)
}

fn min_modulus(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Outcome {
    let topo = values(&ssh200(0.1 * PI, GainLoss::NONE));
    let zeros = topo.iter().filter(|z| z.norm() < 1e-8).count();
    check(zeros == 2, || format!("theta=0.1pi: {zeros} eigenvalues with |E| < 1e-8, expected 2"))?;
    let trivial = min_modulus(&values(&ssh200(0.9 * PI, GainLoss::NONE)));
    check(trivial >= 0.5, || format!("theta=0.9pi: min |E| = {trivial}, expected >= 0.5"))?;
    Ok(format!("zero modes at 0.1pi: {zeros}; min |E| at 0.9pi: {trivial:.6}"))
}

fn criterion_2() -> Outcome {
    let mut counts = Vec::new();
    for mu in [0.0, 0.5, 1.0, 1.5, 2.5, 3.0, 4.0] {
        let count = count_zero_modes_in(&values(&kitaev(200, mu, GainLoss::NONE)), tol().zero_tol);
        let expected = if mu < 2.0 { 2 } else { 0 };
        check(count == expected, || format!("mu={mu}: {count} zero modes, expected {expected}"))?;
        counts.push(count);
    }
    let at_2 = min_modulus(&values(&kitaev(200, 2.0, GainLoss::NONE)));
    let at_25 = min_modulus(&values(&kitaev(200, 2.5, GainLoss::NONE)));
    check(at_2 < 0.1, || format!("min |E| at mu=2.0 is {at_2}"))?;
    check(at_25 > 0.4, || format!("min |E| at mu=2.5 is {at_25}"))?;
    Ok(format!("counts {counts:?}; min |E|: {at_2:.4} (mu=2), {at_25:.4} (mu=2.5)"))
}

fn criterion_3() -> Outcome {
    let t = tol();
    let spec = kitaev(200, 1.0, GainLoss::NONE);
    let d = eigen_decompose(&spec.build().unwrap(), t.residual_tolerance).map_err(|e| e.to_string())?;
    let cls = classify_states(&d, ModelKind::Kitaev, &t).map_err(|e| e.to_string())?;
    let edge = cls
        .edge_states()
        .min_by(|a, b| a.energy.norm().total_cmp(&b.energy.norm()))
        .ok_or("no Kitaev edge state detected")?;
    let phs = occupation_profile(&d.vectors[edge.index], ModelKind::Kitaev).unwrap().phs_deviation().unwrap();
    check(phs < 1e-8, || format!("Kitaev particle-hole deviation {phs:e}"))?;

    let spec = ssh200(0.1 * PI, GainLoss::NONE);
    let d = eigen_decompose(&spec.build().unwrap(), t.residual_tolerance).map_err(|e| e.to_string())?;
    let k = (0..d.dim()).min_by(|&a, &b| d.values[a].norm().total_cmp(&d.values[b].norm())).unwrap();
    let outer = occupation_profile(&d.vectors[k], ModelKind::Ssh).unwrap().edge_weight(10);
    // Decay oracle: occupation per cell shrinks by (t-/t+)^2 into the bulk.
    let c = 0.3 * (0.1 * PI).cos();
    let oracle = 1.0 - ((1.0 - c) / (1.0 + c)).powi(10);
    check(outer > 0.99, || format!("SSH edge weight on outer 10 sites {outer}"))?;
    Ok(format!("Kitaev phs deviation {phs:.2e}; SSH outer weight {outer:.6} (decay oracle {oracle:.6})"))
}

fn criterion_4() -> Outcome {
    let t = tol();
    let mut notes = Vec::new();
    for (name, pot) in [("U1", GainLoss::end_caps(1e-5)), ("U2", GainLoss::staggered(1e-5))] {
        for (theta, expected) in [(0.1, 2), (0.9, 0)] {
            let nr = PtPhase::from_values(&values(&ssh200(theta * PI, pot)), t.reality_tol).non_real_count;
            check(nr == expected, || format!("SSH+{name} theta={theta}pi: {nr} non-real, expected {expected}"))?;
        }
        notes.push(format!("SSH+{name} 2/0"));
    }
    let mut worst = 0.0f64;
    for k in 0..=8 {
        let mu = 0.5 * k as f64;
        let im = values(&kitaev(200, mu, GainLoss::end_caps(1e-5))).iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        check(im < 1e-9, || format!("Kitaev+U1 mu={mu}: max |Im E| = {im:e}"))?;
        worst = worst.max(im);
    }
    notes.push(format!("Kitaev+U1 max|Im E| {worst:.1e}"));
    let spec = kitaev(200, 0.0, GainLoss::staggered(1e-5));
    let d = eigen_decompose(&spec.build().unwrap(), t.residual_tolerance).map_err(|e| e.to_string())?;
    let cls = classify_states(&d, ModelKind::Kitaev, &t).map_err(|e| e.to_string())?;
    let nr = cls.phase.non_real_count;
    let max_edge = cls.non_real_states().map(|s| s.edge_weight).fold(0.0, f64::max);
    check(nr >= 2, || format!("Kitaev+U2 mu=0: only {nr} non-real"))?;
    check(max_edge < 0.5, || format!("Kitaev+U2 mu=0: non-real state with edge weight {max_edge}"))?;
    notes.push(format!("Kitaev+U2 mu=0: {nr} non-real, max edge weight {max_edge:.3}"));
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let t = tol();
    let mut worst_re = 0.0f64;
    for k in 1..=20 {
        let gamma = 0.05 * k as f64;
        let ev = values(&ssh200(0.1 * PI, GainLoss::end_caps(gamma)));
        let non_real: Vec<_> = ev.iter().filter(|z| z.im.abs() >= t.reality_tol).collect();
        check(non_real.len() == 2, || format!("gamma={gamma}: {} non-real eigenvalues", non_real.len()))?;
        let re = non_real.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        check(re < 1e-8, || format!("gamma={gamma}: edge pair Re E = {re:e}"))?;
        worst_re = worst_re.max(re);
    }
    let persist = critical_gamma(&ssh200(0.1 * PI, GainLoss::end_caps(0.0)), 1.0, 0.01, 1e-7, t.reality_tol)
        .map_err(|e| e.to_string())?;
    check(!persist.found, || "SSH 0.1pi + U1 reported complete breaking".into())?;

    let base = ssh200(0.9 * PI, GainLoss::staggered(0.0));
    // Independent oracles: Sturm bisection for the band top, 1e-3 real-count scan.
    let sturm = tridiagonal_max_eigenvalue(&vec![0.0; 200], &ssh_offdiagonal(200, 1.0, 0.3, 0.9 * PI));
    check((sturm - GOLDEN_GAMMA_C).abs() < 1e-12, || format!("Sturm oracle {sturm} drifted from golden"))?;
    let real = |g: f64| PtPhase::from_values(&values(&base.with_gamma(g)), t.reality_tol).real_count;
    let scan: Vec<(f64, usize)> = (1990..=2010).map(|k| k as f64 * 1e-3).map(|g| (g, real(g))).collect();
    let jump = scan.iter().position(|&(_, r)| r == 0).ok_or("1e-3 scan found no complete breaking")?;
    let (lo, hi) = (scan[jump - 1].0, scan[jump].0);
    check(lo < GOLDEN_GAMMA_C && GOLDEN_GAMMA_C <= hi, || format!("scan bracket ({lo}, {hi}) misses golden"))?;

    let res = critical_gamma(&base, 2.0, 0.01, 1e-7, t.reality_tol).map_err(|e| e.to_string())?;
    let gc = res.gamma_c.ok_or("critical_gamma found no complete breaking")?;
    check((gc - GOLDEN_GAMMA_C).abs() <= 1e-4, || format!("gamma_c = {gc}, golden {GOLDEN_GAMMA_C}"))?;
    Ok(format!("edge pair max|Re E| {worst_re:.1e}; U1 found=false; U2 gamma_c = {gc:.9} (golden {GOLDEN_GAMMA_C})"))
}

fn phase_maps(n: usize, steps: usize) -> (PhaseMap, PhaseMap) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    pool.install(|| {
        let u1 = zero_mode_map(&kitaev(n, 0.0, GainLoss::end_caps(0.0)), (0.0, 4.0), (0.0, 2.0), steps, steps, 1e-8)
            .unwrap();
        let u2 = zero_mode_map(&kitaev(n, 0.0, GainLoss::staggered(0.0)), (0.0, 4.0), (0.0, 2.0), steps, steps, 1e-8)
            .unwrap();
        (u1, u2)
    })
}

fn assess_phase_maps(u1: &PhaseMap, u2: &PhaseMap) -> Outcome {
    let mu_step = u1.mu_axis[1] - u1.mu_axis[0];
    let mut u1_bad = Vec::new();
    let mut bad_cells = 0;
    for (i, &mu) in u1.mu_axis.iter().enumerate() {
        if (mu - 2.0).abs() < mu_step / 2.0 {
            continue;
        }
        let expected = if mu < 2.0 { 2 } else { 0 };
        let row: Vec<f64> =
            (0..u1.gamma_axis.len()).filter(|&j| u1.counts[i][j] != expected).map(|j| u1.gamma_axis[j]).collect();
        if !row.is_empty() {
            bad_cells += row.len();
            u1_bad.push(if row.len() == u1.gamma_axis.len() {
                format!("mu={mu:.2} every gamma")
            } else {
                format!("mu={mu:.2} gamma={row:?}")
            });
        }
    }
    let mut failures = Vec::new();
    if !u1_bad.is_empty() {
        failures.push(format!("{bad_cells} U1 cells break the mu<2 rule ({})", u1_bad.join("; ")));
    }
    let outside: usize = (0..u2.mu_axis.len())
        .flat_map(|i| (0..u2.gamma_axis.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| u2.counts[i][j] == 2 && u1.counts[i][j] != 2)
        .count();
    if outside > 0 {
        failures.push(format!("U2 count-2 cells outside U1 region: {outside}"));
    }
    let widths: Vec<usize> = (0..u2.gamma_axis.len()).map(|j| u2.column_two_count(j)).collect();
    if widths.windows(2).any(|w| w[1] > w[0]) {
        failures.push(format!("U2 count-2 region grows with gamma: {widths:?}"));
    }
    if *widths.last().unwrap() != 0 {
        failures.push(format!("U2 region not empty at gamma=2: {}", widths.last().unwrap()));
    }
    if widths.first() <= widths.last() {
        failures.push("U2 region does not shrink".into());
    }
    let violations = u2.monotonicity_violations();
    if !violations.is_empty() {
        failures.push(format!("U2 monotone containment violated at {} cells", violations.len()));
    }
    let summary = format!("U2 count-2 cells per gamma column {widths:?}");
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn criterion_6() -> Outcome {
    let (u1, u2) = phase_maps(100, 41);
    assess_phase_maps(&u1, &u2)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let kind = [PotentialKind::None, PotentialKind::EndCaps, PotentialKind::Staggered][rng.gen_range(0..3)];
        let gamma = if kind == PotentialKind::None { 0.0 } else { rng.gen_range(0.0..3.0) };
        let pot = GainLoss::new(kind, gamma);
        let spec = if rng.gen_bool(0.5) {
            let n = 2 * rng.gen_range(1..=10);
            ModelSpec::ssh(n, rng.gen_range(0.2..2.0), rng.gen_range(-0.9..0.9), rng.gen_range(-PI..PI), pot)
        } else {
            let mut n = rng.gen_range(1..=20usize);
            if kind == PotentialKind::Staggered && n % 2 == 1 {
                n += 1;
            }
            if kind == PotentialKind::EndCaps {
                n = n.max(2);
            }
            ModelSpec::kitaev(n, rng.gen_range(0.2..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-4.0..4.0), pot)
        };
        let m = spec.build().unwrap();
        check(pt_transform(&m, spec.kind()) == m, || format!("trial {trial}: P conj(M) P != M for {spec:?}"))?;
        let ev = eigenvalues(&m).map_err(|e| e.to_string())?;
        let conj: Vec<_> = ev.iter().map(|z| z.conj()).collect();
        let mut d = multiset_distance(&ev, &conj);
        match spec.kind() {
            ModelKind::Kitaev => {
                check(j_anticommutes(&m), || format!("trial {trial}: J M != -M J for {spec:?}"))?;
                let neg: Vec<_> = ev.iter().map(|z| -z).collect();
                d = d.max(multiset_distance(&ev, &neg));
            }
            ModelKind::Ssh => {
                let neg_conj: Vec<_> = ev.iter().map(|z| -z.conj()).collect();
                d = d.max(multiset_distance(&ev, &neg_conj));
            }
        }
        check(d < 1e-8, || format!("trial {trial}: closure distance {d:e} for {spec:?}"))?;
        worst = worst.max(d);
    }
    Ok(format!("200 trials; worst closure distance {worst:.1e}"))
}

fn j_anticommutes(m: &DenseComplexMatrix) -> bool {
    let dim = m.dim();
    let n = dim / 2;
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            let jm = if i < n { m[(n + i, j)] } else { -m[(i - n, j)] };
            let mj = if j < n { -m[(i, n + j)] } else { m[(i, j - n)] };
            jm == -mj
        })
    })
}

fn criterion_8() -> Outcome {
    let rtol = 1e-10;
    let mut worst_ratio = 0.0f64;
    let mut record = |d: &ptchain::EigenDecomposition, m: &DenseComplexMatrix| {
        worst_ratio = worst_ratio.max(d.max_residual / infinity_norm(m));
    };
    for n in [10usize, 50] {
        let m = ModelSpec::ssh(n, 1.0, 0.0, 0.0, GainLoss::NONE).build().unwrap();
        let d = eigen_decompose(&m, rtol).map_err(|e| e.to_string())?;
        for (j, z) in d.values.iter().enumerate() {
            let exact = 2.0 * ((n - j) as f64 * PI / (n + 1) as f64).cos();
            check((z - c(exact, 0.0)).norm() < 1e-10, || format!("uniform chain n={n} j={j}: {z} vs {exact}"))?;
        }
        record(&d, &m);
    }
    for gamma in [0.3, 0.6, 0.8, 1.2] {
        let m = ModelSpec::ssh(2, 1.0, 0.3, 0.0, GainLoss::end_caps(gamma)).build().unwrap();
        let d = eigen_decompose(&m, rtol).map_err(|e| e.to_string())?;
        let s = (Complex64::new(0.49 - gamma * gamma, 0.0)).sqrt();
        let dist = multiset_distance(&d.values, &[s, -s]);
        check(dist < 1e-12, || format!("PT dimer gamma={gamma}: off by {dist:e}"))?;
        record(&d, &m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let entries = (0..25).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let m = DenseComplexMatrix::from_row_major(entries).unwrap();
    let d = eigen_decompose(&m, rtol).map_err(|e| e.to_string())?;
    let dist = multiset_distance(&d.values, &poly_roots(&char_poly(&m)));
    check(dist < 1e-8, || format!("random 5x5 vs characteristic polynomial: {dist:e}"))?;
    record(&d, &m);
    check(worst_ratio <= 1e-10, || format!("residual ratio {worst_ratio:e}"))?;
    Ok(format!("5x5 root distance {dist:.1e}; worst residual/||M|| {worst_ratio:.1e}"))
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "isolated SSH zero modes and gap",
        budget: Some(Duration::from_secs(1)),
        run: criterion_1,
    },
    Criterion {
        id: 2,
        name: "isolated Kitaev zero modes and gap closing",
        budget: Some(Duration::from_secs(5)),
        run: criterion_2,
    },
    Criterion { id: 3, name: "edge-state occupation profiles", budget: Some(Duration::from_secs(2)), run: criterion_3 },
    Criterion { id: 4, name: "small-gamma PT breaking", budget: Some(Duration::from_secs(30)), run: criterion_4 },
    Criterion { id: 5, name: "gamma dependence and critical gamma", budget: None, run: criterion_5 },
    Criterion {
        id: 6,
        name: "zero-mode phase map (N=100, 41x41)",
        budget: Some(Duration::from_secs(600)),
        run: criterion_6,
    },
    Criterion { id: 7, name: "symmetry closure properties", budget: None, run: criterion_7 },
    Criterion { id: 8, name: "solver oracles", budget: None, run: criterion_8 },
];

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("runtime {elapsed:.2?} over budget {b:?}")),
            (o, _) => o,
        };
        match &outcome {
            Ok(detail) => println!("[PASS] {}. {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                println!("[FAIL] {}. {} ({elapsed:.2?}): {why}", c.id, c.name);
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed acceptance criteria: {failed:?}");
}

/// Criterion 6's map at full fidelity (N = 200). Slow; run explicitly with
/// `--ignored`.
#[test]
#[ignore]
fn phase_map_full_fidelity() {
    let (u1, u2) = phase_maps(200, 41);
    match assess_phase_maps(&u1, &u2) {
        Ok(s) => println!("[PASS] phase map N=200: {s}"),
        Err(s) => panic!("[FAIL] phase map N=200: {s}"),
    }
}
