//! End-to-end guarantee checks on instances engineered so the later
//! pipeline phases cannot hide behind the initializer: the estimates start
//! at the worst value the init contract allows and the low-degree step is
//! switched off, so only the sampling pipeline can bring far pairs within
//! a factor of two.

use apx_core::dist::Dist;
use apx_core::estimate::InitVariant;
use apx_core::generate::barbell_edges_with_clique;
use apx_core::graph::Graph;
use apx_core::oracle::{check_guarantees, check_lemma_suite, exact_apsp};
use apx_core::pipeline::{run, RunConfig};

fn wide_barbell(n: usize) -> Graph {
    let edges = barbell_edges_with_clique(n, n / 4);
    Graph::from_edge_list(&edges, n).unwrap().0
}

#[test]
fn pipeline_earns_the_guarantee_without_init_help() {
    let n = 512;
    let g = wide_barbell(n);
    let exact = exact_apsp(&g);
    for seed in [1u64, 2, 3] {
        for k in [2u32, 4] {
            let cfg = RunConfig {
                k,
                seed,
                init_variant: InitVariant::Pessimistic21,
                tau_lowdeg: Some(0),
                force_pipeline: true,
                ..Default::default()
            };
            let out = run(&g, &cfg).unwrap();
            let report = check_guarantees(&out.est.snapshot(), &exact, k, None).unwrap();
            assert_eq!(report.soundness_violations, 0, "seed {seed} k {k}: unsound");
            assert_eq!(
                report.two_approx_violations, 0,
                "seed {seed} k {k}: far pairs above 2d (max gap {})",
                report.max_additive_gap
            );
            assert_eq!(
                report.additive_violations, 0,
                "seed {seed} k {k}: combined bound broken"
            );
        }
    }
}

#[test]
fn far_pairs_exist_in_the_stress_family() {
    let g = wide_barbell(512);
    let exact = exact_apsp(&g);
    let mut far = 0u64;
    for s in 0..512u32 {
        for t in (s + 1)..512u32 {
            if exact.get(s, t).is_finite() && exact.get(s, t).0 >= 54 {
                far += 1;
            }
        }
    }
    assert!(far > 10_000, "stress family lost its far pairs: {far}");
}

// After any (2,1)-conforming initialization, pairs one hop away from a base
// pair inherit est(u,v) <= 2 d(a,b) + 5; the closeness derivations start
// from exactly this bound.
#[test]
fn init_estimates_track_nearby_pairs_within_five() {
    use apx_core::generate::{generate, Family, GeneratorSpec};
    use apx_core::pipeline::prepare;

    let mut spec = GeneratorSpec::new(Family::Gnp, 200, 6);
    spec.p = 0.05;
    let g = generate(&spec).unwrap();
    let exact = exact_apsp(&g);
    let cfg = RunConfig {
        seed: 6,
        force_pipeline: true,
        snapshot_phases: true,
        ..Default::default()
    };
    let prepared = prepare(&g, &cfg).unwrap();
    let out = prepared.finish(2).unwrap();
    let init = out.snapshot("init").unwrap();
    for a in 0..200u32 {
        for b in (a + 1)..200u32 {
            let d = exact.get(a, b);
            if !d.is_finite() {
                continue;
            }
            for &u in std::iter::once(&a).chain(g.neighbors(a)) {
                for &v in std::iter::once(&b).chain(g.neighbors(b)) {
                    if u == v {
                        continue;
                    }
                    assert!(
                        init.get(u, v).0 <= 2 * d.0 + 5,
                        "est({u},{v}) = {:?} > 2*{:?}+5 with (a,b)=({a},{b})",
                        init.get(u, v),
                        d
                    );
                }
            }
        }
    }
}

// Phase snapshots only ever decrease, pointwise.
#[test]
fn phase_snapshots_are_pointwise_non_increasing() {
    use apx_core::generate::{generate, Family, GeneratorSpec};

    let mut spec = GeneratorSpec::new(Family::Gnp, 260, 2);
    spec.p = 0.04;
    let g = generate(&spec).unwrap();
    let cfg = RunConfig {
        k: 4,
        seed: 2,
        snapshot_phases: true,
        ..Default::default()
    };
    let out = run(&g, &cfg).unwrap();
    assert!(out.snapshots.len() >= 4);
    for pair in out.snapshots.windows(2) {
        let (before, after) = (&pair[0].1, &pair[1].1);
        for s in 0..260u32 {
            for t in 0..260u32 {
                assert!(
                    after.get(s, t) <= before.get(s, t),
                    "({s},{t}) grew between {} and {}",
                    pair[0].0,
                    pair[1].0
                );
            }
        }
    }
}

// Degenerate sizes must run cleanly when the pipeline is forced, and agree
// with the oracle outright.
#[test]
fn forced_pipeline_on_tiny_graphs() {
    use apx_core::generate::{generate, Family, GeneratorSpec};

    for n in [2usize, 3, 4, 5, 16] {
        let g = generate(&GeneratorSpec::new(Family::Path, n, 0)).unwrap();
        let exact = exact_apsp(&g);
        let cfg = RunConfig {
            force_pipeline: true,
            ..Default::default()
        };
        let out = run(&g, &cfg).unwrap();
        let report = check_guarantees(&out.est.snapshot(), &exact, 2, None).unwrap();
        assert_eq!(report.soundness_violations, 0, "n={n}");
        assert_eq!(report.two_approx_violations, 0, "n={n}");
    }
}

// The witness checker must be able to fail: corrupting the recorded
// wide-scale snapshot upward has to produce misses, and a run without
// snapshots has to be rejected outright.
#[test]
fn lemma_checker_catches_injected_regressions() {
    use apx_core::generate::{generate, Family, GeneratorSpec};

    let g = generate(&GeneratorSpec::new(Family::Path, 256, 0)).unwrap();
    let exact = exact_apsp(&g);
    let cfg = RunConfig {
        k: 4,
        seed: 1,
        force_pipeline: true,
        snapshot_phases: true,
        ..Default::default()
    };
    let mut out = run(&g, &cfg).unwrap();

    let clean = check_lemma_suite(&g, &exact, &out).unwrap();
    assert_eq!(clean.base_plus4.satisfied, clean.base_plus4.checked);
    assert!(clean.base_plus4.checked > 0);

    // Push every pair in the wide-scale snapshot far above any +4 bound.
    for (label, snap) in &mut out.snapshots {
        if label == "base_case" {
            for s in 0..256u32 {
                for t in (s + 1)..256u32 {
                    snap.set(s, t, Dist(100_000));
                }
            }
        }
    }
    let broken = check_lemma_suite(&g, &exact, &out).unwrap();
    assert!(
        broken.base_plus4.satisfied < broken.base_plus4.checked,
        "checker accepted a corrupted snapshot"
    );
    assert!(!broken.base_plus4.violations.is_empty());

    // Without snapshots the suite refuses to run.
    let bare = run(
        &g,
        &RunConfig {
            snapshot_phases: false,
            ..cfg
        },
    )
    .unwrap();
    assert!(check_lemma_suite(&g, &exact, &bare).is_err());
}

// A full pipeline run on exact-from-the-start estimates never disturbs
// them: every phase is a monotone min-merge of walk lengths.
#[test]
fn pipeline_is_a_fixed_point_on_exact_estimates() {
    use apx_core::generate::{generate, Family, GeneratorSpec};
    use apx_core::InitVariant;

    let mut spec = GeneratorSpec::new(Family::Gnp, 300, 4);
    spec.p = 0.03;
    let g = generate(&spec).unwrap();
    let exact = exact_apsp(&g);
    let cfg = RunConfig {
        k: 4,
        seed: 4,
        init_variant: InitVariant::Exact,
        force_pipeline: true,
        ..Default::default()
    };
    let out = run(&g, &cfg).unwrap();
    assert_eq!(out.est.snapshot(), exact);
}
