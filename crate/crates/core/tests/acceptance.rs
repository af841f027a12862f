//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`; exits non-zero when any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use entropyflow::classical::{
    aggregate_asymmetric, aggregate_naive, box_hidden_information, box_probabilities,
    boxwise_density, continuum_entropy, diffusion_step, geometric_mean_volume, shannon_entropy,
    DiffusionSpec, GridDensity, ProbabilityVector,
};
use entropyflow::linalg::{ComplexMatrix, C64};
use entropyflow::quantum::{
    asymmetric_mix, decohere_full, decohere_partial, default_s_grid, entropy_flow_curve,
    maximal_mix, relative_entropy, tuneable_asymmetric_mix, tuneable_partial_trace,
    von_neumann_entropy, BipartiteEntropies, CoarseFamily, DensityMatrix, ProjectorBasis,
};
use entropyflow::sampling::{
    random_bipartite_state, random_density_matrix, random_density_matrix_with_rank,
    random_grid_density, random_partition, random_probability_vector, random_unitary,
    rng_from_seed, SampleRng,
};
use entropyflow::superscattering::{
    build_channel, incoherent_sum, partial_trace_diffusion, ChannelSpec, DiffusionPropagator,
    SuperScattering, UnitaryEnsemble,
};

/// One sub-check: what was measured, against what limit.
struct Check {
    what: String,
    ok: bool,
}

fn check(what: impl Into<String>, ok: bool) -> Check {
    Check { what: what.into(), ok }
}

fn within_time(limit: Duration, elapsed: Duration) -> Check {
    check(format!("runtime {:.2}s < {}s", elapsed.as_secs_f64(), limit.as_secs()), elapsed < limit)
}

/// Bipartitions with `N_A N_B <= 16`.
const DIMS: &[(usize, usize)] = &[
    (2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (2, 5), (5, 2),
    (2, 6), (6, 2), (3, 4), (4, 3), (2, 7), (7, 2), (3, 5), (5, 3), (2, 8), (8, 2), (4, 4),
];

fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let n = 101;
    let h = 1.0 / n as f64;
    let mut rho = GridDensity::spike(vec![n], vec![h], n / 2, 1.0).unwrap();
    let spec = DiffusionSpec::simple(1.0, DiffusionSpec::max_stable_step(&rho, 1.0));
    let uniform = continuum_entropy(&GridDensity::uniform(vec![n], vec![h], 1.0).unwrap());
    let mut prev = continuum_entropy(&rho);
    let mut worst_step = f64::INFINITY;
    let mut worst_mass: f64 = 0.0;
    for _ in 0..1000 {
        rho = diffusion_step(&rho, &spec).unwrap();
        let s = continuum_entropy(&rho);
        worst_step = worst_step.min(s - prev);
        worst_mass = worst_mass.max((rho.total_mass() - 1.0).abs());
        prev = s;
    }
    let gap = (uniform - prev).abs();
    vec![
        check(format!("min per-step entropy change {worst_step:.3e} >= -1e-12"), worst_step >= -1e-12),
        check(format!("max mass drift {worst_mass:.3e} <= 1e-12"), worst_mass <= 1e-12),
        check(format!("terminal gap to uniform entropy {gap:.6e} <= 1e-6"), gap <= 1e-6),
        within_time(Duration::from_secs(1), start.elapsed()),
    ]
}

fn random_grid_and_partition(rng: &mut SampleRng, rho_star: f64) -> (GridDensity, entropyflow::classical::BoxPartition) {
    let dims = rng.random_range(1..=3);
    let shape: Vec<usize> = (0..dims).map(|_| rng.random_range(2..=if dims == 1 { 60 } else { 10 })).collect();
    let spacing: Vec<f64> = shape.iter().map(|_| rng.random_range(0.05..0.5)).collect();
    let grid = random_grid_density(rng, shape, spacing, rho_star).unwrap();
    let boxes = rng.random_range(1..=grid.len().min(16));
    let part = random_partition(rng, &grid, boxes).unwrap();
    (grid, part)
}

fn criterion_2() -> Vec<Check> {
    let start = Instant::now();
    let mut rng = rng_from_seed(2);
    let (mut worst_gain, mut worst_identity, mut worst_invariance) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let (grid, part) = random_grid_and_partition(&mut rng, 1.0);
        let boxed = continuum_entropy(&boxwise_density(&grid, &part).unwrap());
        worst_gain = worst_gain.min(boxed - continuum_entropy(&grid));
        let p = box_probabilities(&grid, &part).unwrap();
        let vbar = geometric_mean_volume(&p, &part).unwrap();
        worst_identity = worst_identity.max((boxed - shannon_entropy(&p) - vbar.ln()).abs());
        let base = box_hidden_information(&grid, &part).unwrap();
        for rs in [0.1, 10.0] {
            let other = box_hidden_information(&grid.with_rho_star(rs).unwrap(), &part).unwrap();
            worst_invariance = worst_invariance.max((other - base).abs());
        }
    }
    vec![
        check(format!("min S(rho_B) - S(rho) = {worst_gain:.3e} >= -1e-9"), worst_gain >= -1e-9),
        check(format!("max identity residual {worst_identity:.3e} <= 1e-9"), worst_identity <= 1e-9),
        check(format!("max rho* dependence {worst_invariance:.3e} <= 1e-9"), worst_invariance <= 1e-9),
        within_time(Duration::from_secs(10), start.elapsed()),
    ]
}

fn criterion_3() -> Vec<Check> {
    let start = Instant::now();
    let mut rng = rng_from_seed(3);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let n = rng.random_range(2..=32);
        let p = random_probability_vector(&mut rng, n).unwrap();
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let lambda = rng.random_range(0.001..0.999);
        let s = shannon_entropy(&p);
        worst = worst.min(shannon_entropy(&aggregate_naive(&p, a, b).unwrap()) - s);
        worst = worst.min(shannon_entropy(&aggregate_asymmetric(&p, a, b, lambda).unwrap()) - s);
    }
    let mut worst_gap: f64 = 0.0;
    for n in 2..=32 {
        let mut p = random_probability_vector(&mut rng, n).unwrap();
        let target = (n as f64).ln();
        let mut round = 0;
        while target - shannon_entropy(&p) > 1e-9 && round < 1_000_000 {
            p = aggregate_naive(&p, round % n, (round + 1) % n).unwrap();
            round += 1;
        }
        worst_gap = worst_gap.max(target - shannon_entropy(&p));
    }
    vec![
        check(format!("min entropy change over 10^4 triples {worst:.3e} >= -1e-12"), worst >= -1e-12),
        check(format!("iterated naive aggregation max gap to ln N {worst_gap:.3e} <= 1e-9"), worst_gap <= 1e-9),
        within_time(Duration::from_secs(5), start.elapsed()),
    ]
}

fn criterion_4() -> Vec<Check> {
    let start = Instant::now();
    let mut rng = rng_from_seed(4);
    let grid = default_s_grid();
    let (mut worst_mono, mut worst_bound, mut worst_end) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for k in 0..100 {
        let (na, nb) = DIMS[k % DIMS.len()];
        let rank = rng.random_range(1..=na * nb);
        let rho = random_density_matrix_with_rank(&mut rng, na * nb, rank).unwrap().into_bipartite((na, nb)).unwrap();
        let e = BipartiteEntropies::of(&rho).unwrap();
        let basis = ProjectorBasis::from_unitary(&random_unitary(&mut rng, na * nb)).unwrap();
        let families = [
            (CoarseFamily::MaximalMix, Some((na as f64 * nb as f64).ln())),
            (CoarseFamily::TuneablePartialTrace, Some(e.a + e.b)),
            (CoarseFamily::TuneableAsymmetricMix, Some(e.a + (nb as f64).ln())),
            (CoarseFamily::PartialDecoherence(basis), None),
        ];
        for (fam, end) in &families {
            let curve = entropy_flow_curve(fam, &rho, &grid).unwrap();
            for w in curve.windows(2) {
                worst_mono = worst_mono.min(w[1].entropy - w[0].entropy);
            }
            for p in &curve {
                worst_bound = worst_bound.min((p.hidden - p.lower).min(p.upper - p.hidden));
            }
            if let Some(end) = end {
                worst_end = worst_end.max((curve.last().unwrap().entropy - end).abs());
            }
        }
    }
    vec![
        check(format!("min step along s {worst_mono:.3e} >= -1e-9"), worst_mono >= -1e-9),
        check(format!("min bound slack {worst_bound:.3e} >= -1e-9"), worst_bound >= -1e-9),
        check(format!("max endpoint error {worst_end:.3e} <= 1e-9"), worst_end <= 1e-9),
        within_time(Duration::from_secs(60), start.elapsed()),
    ]
}

fn criterion_5() -> Vec<Check> {
    let mut rng = rng_from_seed(5);
    let mut worst_klein = f64::INFINITY;
    for k in 0..1000 {
        let n = 2 + k % 7;
        let rho = random_density_matrix(&mut rng, n).unwrap();
        let sigma = random_density_matrix(&mut rng, n).unwrap();
        worst_klein = worst_klein.min(relative_entropy(&rho, &sigma).unwrap());
    }
    let mut worst_triangle = f64::INFINITY;
    for k in 0..1000 {
        let (na, nb) = DIMS[k % 8];
        let rank = rng.random_range(1..=na * nb);
        let rho = random_density_matrix_with_rank(&mut rng, na * nb, rank).unwrap().into_bipartite((na, nb)).unwrap();
        let e = BipartiteEntropies::of(&rho).unwrap();
        worst_triangle = worst_triangle.min(e.joint - (e.a - e.b).abs()).min(e.a + e.b - e.joint);
    }
    let mut worst_identity: f64 = 0.0;
    for k in 0..200 {
        let n = 2 + k % 7;
        let rho = random_density_matrix(&mut rng, n).unwrap();
        let basis = if k % 2 == 0 {
            ProjectorBasis::computational(n)
        } else {
            ProjectorBasis::from_unitary(&random_unitary(&mut rng, n)).unwrap()
        };
        let d = decohere_full(&rho, &basis).unwrap();
        let gap = von_neumann_entropy(&d) - von_neumann_entropy(&rho);
        worst_identity = worst_identity.max((gap - relative_entropy(&rho, &d).unwrap()).abs());
    }
    vec![
        check(format!("min relative entropy {worst_klein:.3e} >= -1e-9"), worst_klein >= -1e-9),
        check(format!("min triangle slack {worst_triangle:.3e} >= -1e-9"), worst_triangle >= -1e-9),
        check(format!("max decoherence identity residual {worst_identity:.3e} <= 1e-9"), worst_identity <= 1e-9),
    ]
}

type Direct = Box<dyn Fn(&DensityMatrix) -> DensityMatrix>;

fn table(rng: &mut SampleRng, dims: (usize, usize)) -> Vec<(&'static str, SuperScattering, Direct)> {
    let n = dims.0 * dims.1;
    let s = 0.37;
    let basis = ProjectorBasis::from_unitary(&random_unitary(rng, n)).unwrap();
    let ens = UnitaryEnsemble::new(
        ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap(),
        (0..3).map(|_| random_unitary(rng, n)).collect(),
    )
    .unwrap();
    let (b1, b2, e1) = (basis.clone(), basis.clone(), ens.clone());
    vec![
        ("maximal", build_channel(&ChannelSpec::Maximal { dim: n, s }).unwrap(), Box::new(move |r| maximal_mix(r, s).unwrap())),
        ("partialMaximal", build_channel(&ChannelSpec::PartialMaximal { dims }).unwrap(), Box::new(|r| asymmetric_mix(r).unwrap())),
        (
            "partialMaximalTuneable",
            build_channel(&ChannelSpec::PartialMaximalTuneable { dims, s }).unwrap(),
            Box::new(move |r| tuneable_asymmetric_mix(r, s).unwrap()),
        ),
        (
            "fullDecoherence",
            build_channel(&ChannelSpec::FullDecoherence(basis)).unwrap(),
            Box::new(move |r| decohere_full(r, &b1).unwrap()),
        ),
        (
            "partialDecoherence",
            build_channel(&ChannelSpec::PartialDecoherence { basis: b2.clone(), s }).unwrap(),
            Box::new(move |r| decohere_partial(r, &b2, s).unwrap()),
        ),
        (
            "incoherentSum",
            build_channel(&ChannelSpec::IncoherentSum(ens)).unwrap(),
            Box::new(move |r| incoherent_sum(&e1, r).unwrap()),
        ),
    ]
}

fn criterion_6() -> Vec<Check> {
    let mut rng = rng_from_seed(6);
    let mut worst_agree: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    for dims in [(2, 2), (2, 3), (3, 3)] {
        let n = dims.0 * dims.1;
        for (_, chan, direct) in table(&mut rng, dims) {
            for _ in 0..100 {
                let rank = rng.random_range(1..=n);
                let rho = random_density_matrix_with_rank(&mut rng, n, rank).unwrap().into_bipartite(dims).unwrap();
                let via = chan.apply(&rho).unwrap();
                worst_agree = worst_agree.max(via.matrix().max_abs_diff(direct(&rho).matrix()));
            }
            let delta = chan.generator();
            for col in 0..n * n {
                let tr: C64 = (0..n).map(|i| delta[(i * n + i, col)]).sum();
                worst_trace = worst_trace.max(tr.norm());
            }
        }
    }
    vec![
        check(format!("max channel/direct difference {worst_agree:.3e} <= 1e-10"), worst_agree <= 1e-10),
        check(format!("max |tr(Delta E_kl)| {worst_trace:.3e} <= 1e-10"), worst_trace <= 1e-10),
    ]
}

fn criterion_7() -> Vec<Check> {
    let mut rng = rng_from_seed(7);
    let mut worst_semigroup: f64 = 0.0;
    let mut worst_mono = f64::INFINITY;
    for dims in [(2, 2), (2, 3)] {
        for (_, chan, _) in table(&mut rng, dims) {
            let rho = random_bipartite_state(&mut rng, dims.0, dims.1).unwrap();
            let (t1, t2) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
            let joint = DiffusionPropagator::new(&chan, t1 + t2).unwrap().apply(&rho).unwrap();
            let first = DiffusionPropagator::new(&chan, t1).unwrap().apply(&rho).unwrap();
            let split = DiffusionPropagator::new(&chan, t2).unwrap().apply(&first).unwrap();
            worst_semigroup = worst_semigroup.max(joint.matrix().max_abs_diff(split.matrix()));

            let pure = random_density_matrix_with_rank(&mut rng, dims.0 * dims.1, 1).unwrap();
            let mut prev = von_neumann_entropy(&pure);
            for i in 1..20 {
                let t = 10.0 * i as f64 / 19.0;
                let s = von_neumann_entropy(&DiffusionPropagator::new(&chan, t).unwrap().apply(&pure).unwrap());
                worst_mono = worst_mono.min(s - prev);
                prev = s;
            }
        }
    }

    let n = 4;
    let rho = random_density_matrix_with_rank(&mut rng, n, 1).unwrap();
    let maximal = build_channel(&ChannelSpec::Maximal { dim: n, s: 1.0 }).unwrap();
    let out = DiffusionPropagator::new(&maximal, 40.0).unwrap().apply(&rho).unwrap();
    let dist = out.matrix().frobenius_distance(&ComplexMatrix::identity(n).scale(1.0 / n as f64));

    let r = 0.5f64.sqrt();
    let plus = DensityMatrix::pure(&[C64::new(r, 0.0), C64::new(r, 0.0)]).unwrap();
    let deco = build_channel(&ChannelSpec::FullDecoherence(ProjectorBasis::computational(2))).unwrap();
    let ev = DiffusionPropagator::new(&deco, 1.0).unwrap().apply(&plus).unwrap().eigenvalues().to_vec();
    let e = (-1.0f64).exp();
    let ev_err = (ev[0] - 0.5 * (1.0 - e)).abs().max((ev[1] - 0.5 * (1.0 + e)).abs());

    let mut worst_ptd: f64 = 0.0;
    for k in 0..50 {
        let (na, nb) = DIMS[k % DIMS.len()];
        let rho = random_bipartite_state(&mut rng, na, nb).unwrap();
        let t = rng.random_range(0.0..10.0);
        let a = partial_trace_diffusion(&rho, t).unwrap();
        let b = tuneable_partial_trace(&rho, -(-t as f64).exp_m1()).unwrap();
        worst_ptd = worst_ptd.max(a.matrix().max_abs_diff(b.matrix()));
    }
    vec![
        check(format!("max semigroup defect {worst_semigroup:.3e} <= 1e-9"), worst_semigroup <= 1e-9),
        check(format!("min entropy step on [0, 10] {worst_mono:.3e} >= -1e-9"), worst_mono >= -1e-9),
        check(format!("||rho_40 - I/N||_F = {dist:.3e} <= 1e-6"), dist <= 1e-6),
        check(format!("decoherence eigenvalue error {ev_err:.3e} <= 1e-10"), ev_err <= 1e-10),
        check(format!("partial trace diffusion vs tuneable {worst_ptd:.3e} <= 1e-12"), worst_ptd <= 1e-12),
    ]
}

fn criterion_8() -> Vec<Check> {
    let bin = env!("CARGO_BIN_EXE_entropyflow");
    let audit = |extra: &[&str]| {
        Command::new(bin)
            .args(["audit", "--seed", "42"])
            .args(extra)
            .output()
            .expect("binary runs")
    };
    let a = audit(&[]);
    let b = audit(&[]);
    let fault = audit(&["--inject-fault"]);
    let report: serde_json::Value = serde_json::from_slice(&fault.stdout).unwrap_or_default();
    let named = report["suites"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|s| s["counterexample"].as_object())
        .any(|c| c.get("channel").and_then(|v| v.as_str()) == Some("injectedReplacement"));
    vec![
        check(format!("audit --seed 42 exit code {:?} == 0", a.status.code()), a.status.code() == Some(0)),
        check("two runs byte-identical", a.stdout == b.stdout && !a.stdout.is_empty()),
        check(format!("injected fault exit code {:?} == 3", fault.status.code()), fault.status.code() == Some(3)),
        check("counterexample names the injected channel", named),
    ]
}

type Criterion = (&'static str, fn() -> Vec<Check>);

fn main() {
    let criteria: [Criterion; 8] = [
        ("classical diffusion monotonicity", criterion_1),
        ("box-averaging inequality suite", criterion_2),
        ("aggregation", criterion_3),
        ("quantum family bounds", criterion_4),
        ("Klein/triangle suite", criterion_5),
        ("super-scattering equivalence", criterion_6),
        ("Hilbert diffusion", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let checks = f();
        let ok = checks.iter().all(|c| c.ok);
        println!("{} criterion {}: {name}", if ok { "PASS" } else { "FAIL" }, i + 1);
        for c in &checks {
            println!("    [{}] {}", if c.ok { "ok" } else { "FAILED" }, c.what);
        }
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
