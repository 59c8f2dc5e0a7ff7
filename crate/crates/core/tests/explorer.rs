use entloc::channels::NoiseKind;
use entloc::explorer::{
    optimize_reversal, pareto_frontier, preset, sweep, Objective, ParamName, SweepTable, Q_MAX,
};
use entloc::protocols::{closed_form, run, ProtocolParams};
use entloc::states::InitialState;

fn column(table: &SweepTable, name: &str) -> Vec<f64> {
    table.rows.iter().map(|r| table.value(r, name).unwrap()).collect()
}

#[test]
fn fig1a_corner_is_the_distributed_closed_form() {
    let table = sweep(&preset("fig1a").unwrap()).unwrap();
    assert_eq!(table.rows.len(), 32 * 32);
    let corner = table.value(&table.rows[0], "concurrence").unwrap();
    // p = 0 with q = 0.99 gives 0.5 / (0.5 + 0.5·0.01) = 1/1.01.
    assert!((corner - 1.0 / 1.01).abs() < 1e-12);
    let expected = closed_form::distributed_concurrence(0.0, 0.0, 0.99, 0.99).unwrap();
    assert!((corner - expected).abs() < 1e-12);
    assert!(column(&table, "deviation").iter().all(|&d| d <= 1e-9));
}

#[test]
fn fig1b_peaks_at_strongest_weak_measurement() {
    let table = sweep(&preset("fig1b").unwrap()).unwrap();
    let c = column(&table, "concurrence");
    let p3 = column(&table, "p3");
    let max = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let at_max: Vec<f64> = c.iter().zip(&p3).filter(|(v, _)| **v == max).map(|(_, p)| *p).collect();
    assert!(at_max.contains(&0.99), "{at_max:?}");
}

#[test]
fn fig4b_pure_states_beat_no_measurement() {
    let table = sweep(&preset("fig4b").unwrap()).unwrap();
    for row in table.rows.iter().filter(|r| r.initial != Some(InitialState::GwMixed)) {
        let initial = row.initial.unwrap();
        let bare = run(&ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0)
            .with_noise(NoiseKind::AmplitudeDamping, 0.6, 0.6)
            .with_initial(initial))
        .unwrap()
        .concurrence
        .unwrap();
        let c = table.value(row, "concurrence").unwrap();
        assert!(c > bare, "{initial} p={}: {c} vs {bare}", row.inputs[0]);
    }
}

#[test]
fn fig3_presets_carry_their_axis_note() {
    for name in ["fig3b", "fig3c"] {
        let spec = preset(name).unwrap();
        assert!(spec.notes.iter().any(|n| n.contains("optimised")));
    }
    let csv = sweep(&preset("fig3c").unwrap()).unwrap().to_csv();
    assert!(csv.starts_with("# "));
    assert!(csv.lines().nth(1).unwrap().starts_with("p3,q3,concurrence"));
}

#[test]
fn optimizer_beats_coarse_two_dimensional_scan() {
    let base = ProtocolParams::distributed(0.3, 0.5, 0.0, 0.0).with_noise(NoiseKind::AmplitudeDamping, 0.4, 0.2);
    let r = optimize_reversal(&base, &[ParamName::Q1, ParamName::Q2], Objective::Concurrence).unwrap();
    let mut best = f64::NEG_INFINITY;
    for i in 0..10 {
        for j in 0..10 {
            let mut p = base;
            p.q1 = Q_MAX * i as f64 / 9.0;
            p.q2 = Q_MAX * j as f64 / 9.0;
            best = best.max(run(&p).unwrap().concurrence.unwrap());
        }
    }
    assert!(r.concurrence.unwrap() >= best - 1e-6);
}

#[test]
fn constrained_optimum_matches_dense_grid() {
    let base = ProtocolParams::distributed(0.1, 0.1, 0.0, 0.0).with_noise(NoiseKind::AmplitudeDamping, 0.6, 0.6);
    let s_min = 0.25;
    let r = optimize_reversal(&base, &[ParamName::Q1, ParamName::Q2], Objective::ConcurrenceAtMinSuccess(s_min)).unwrap();
    assert!(r.feasible);
    assert!(r.success_prob >= s_min);

    let qs: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).chain([Q_MAX]).collect();
    let mut oracle = f64::NEG_INFINITY;
    for &q1 in &qs {
        for &q2 in &qs {
            let mut p = base;
            p.q1 = q1;
            p.q2 = q2;
            let out = run(&p).unwrap();
            if out.success_prob >= s_min {
                oracle = oracle.max(out.concurrence.unwrap());
            }
        }
    }
    let value = r.concurrence.unwrap();
    assert!((value - oracle).abs() < 1e-3, "{value} vs {oracle}");

    let free = optimize_reversal(&base, &[ParamName::Q1, ParamName::Q2], Objective::Concurrence).unwrap();
    assert!(value < free.concurrence.unwrap());
}

#[test]
fn pareto_front_has_no_dominated_points() {
    let base = ProtocolParams::distributed(0.2, 0.4, 0.0, 0.0).with_noise(NoiseKind::AmplitudeDamping, 0.3, 0.3);
    let front = pareto_frontier(&base, &[ParamName::Q1, ParamName::Q2], 12).unwrap();
    assert!(!front.is_empty());
    for a in &front {
        for b in &front {
            assert!(!b.dominates(a), "{b:?} dominates {a:?}");
        }
    }
    assert!(front.windows(2).all(|w| w[0].success_prob >= w[1].success_prob && w[0].concurrence <= w[1].concurrence));
}

#[test]
fn presets_are_deterministic() {
    for name in ["fig1a", "fig2c", "fig4a"] {
        let spec = preset(name).unwrap();
        assert_eq!(sweep(&spec).unwrap().to_csv(), sweep(&spec).unwrap().to_csv());
    }
}
