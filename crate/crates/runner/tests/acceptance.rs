//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use loclab_core::axioms::{ConditionId, Outcome, Probe, RegionCatalog, TolerancePolicy};
use loclab_core::nogo::{BorchersOutcome, ConclusionKind, ConditionMatrix, ZeroSetClass};
use loclab_core::opkernel::commutator_norm;
use loclab_core::spacetime::region_distance;
use loclab_runner::catalog::{self, list_systems};
use loclab_runner::config::{Experiment, ExperimentConfig, OutputSpec, SystemSpec};
use loclab_runner::export::csv_rows;
use loclab_runner::report::{ExperimentResult, ReportDocument};
use loclab_runner::run;

const PASS_TOL: f64 = 1e-8;
const FAIL_TOL: f64 = 1e-6;
const TIGHT_TOL: f64 = 1e-10;

const SHARP_HYPOTHESES: [ConditionId; 5] = [
    ConditionId::Localizability,
    ConditionId::Covariance,
    ConditionId::EnergyBoundedBelow,
    ConditionId::Microcausality,
    ConditionId::ProbabilityConservation,
];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(name: &str, size: usize) -> SystemSpec {
    SystemSpec {
        size: Some(size),
        ..SystemSpec::named(name)
    }
}

fn config(systems: Vec<SystemSpec>, experiments: Vec<Experiment>, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        systems,
        experiments,
        tolerances: TolerancePolicy::default(),
        output: OutputSpec::default(),
        seed,
    }
}

fn go(c: &ExperimentConfig) -> Result<ReportDocument, String> {
    run(c).map_err(|e| e.to_string())
}

fn matrices(systems: Vec<SystemSpec>) -> Result<Vec<ConditionMatrix>, String> {
    Ok(go(&config(systems, vec![Experiment::Matrix], 0))?.matrices().cloned().collect())
}

fn residual(m: &ConditionMatrix, c: ConditionId) -> f64 {
    m.verdict(c).residual
}

fn passes(m: &ConditionMatrix, c: ConditionId, tol: f64) -> Result<(), String> {
    let v = m.verdict(c);
    ensure(v.outcome == Outcome::Pass && v.residual <= tol, || {
        format!("{}: {c} expected pass (<= {tol:e}), got {:?} {:e}", m.system_label, v.outcome, v.residual)
    })
}

fn fails(m: &ConditionMatrix, c: ConditionId) -> Result<(), String> {
    let v = m.verdict(c);
    ensure(v.outcome == Outcome::Fail && v.residual > FAIL_TOL && v.witness.is_some(), || {
        format!("{}: {c} expected fail (> {FAIL_TOL:e}), got {:?} {:e}", m.system_label, v.outcome, v.residual)
    })
}

fn c1() -> Check {
    let expected = [
        ("standard_nonrelativistic", ConditionId::Microcausality),
        ("newton_wigner", ConditionId::Microcausality),
        ("momentum_hamiltonian", ConditionId::EnergyBoundedBelow),
        ("frozen", ConditionId::Covariance),
        ("only_d0", ConditionId::ProbabilityConservation),
        ("all_but_d0", ConditionId::Localizability),
    ];
    let start = Instant::now();
    let ms = matrices(expected.iter().map(|(n, _)| spec(n, 64)).collect())?;
    let secs = start.elapsed().as_secs_f64();
    let mut worst_pass: f64 = 0.0;
    let mut least_fail = f64::INFINITY;
    for (m, (_, bad)) in ms.iter().zip(expected) {
        for c in SHARP_HYPOTHESES {
            if c == bad {
                fails(m, c)?;
                least_fail = least_fail.min(residual(m, c));
            } else {
                passes(m, c, PASS_TOL)?;
                worst_pass = worst_pass.max(residual(m, c));
            }
        }
        ensure(m.conclusion_kind == ConclusionKind::TrivialDynamics && !m.conclusion_holds, || {
            format!("{}: trivial dynamics should fail", m.system_label)
        })?;
    }
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "6 systems at N=64, max passing residual {worst_pass:.1e}, min failing residual {least_fail:.1e}, {secs:.1} s"
    ))
}

fn c2() -> Check {
    let sharp: Vec<SystemSpec> = list_systems()
        .into_iter()
        .filter(|e| e.variant == "sharp")
        .map(|e| spec(&e.name, 16))
        .collect();
    let ms = matrices(sharp)?;
    let mut consistent = Vec::new();
    for m in &ms {
        if SHARP_HYPOTHESES.iter().all(|&c| m.verdict(c).outcome == Outcome::Pass) {
            ensure(m.conclusion_holds && m.conclusion_residual <= TIGHT_TOL, || {
                format!(
                    "{} meets the hypotheses but trivial dynamics residual {:e}",
                    m.system_label, m.conclusion_residual
                )
            })?;
            consistent.push(m.system_label.clone());
        }
    }
    ensure(consistent == ["zero_distinguished"], || format!("hypotheses met by {consistent:?}"))?;
    let z = ms.iter().find(|m| m.system_label == "zero_distinguished").unwrap();
    fails(z, ConditionId::NoAbsoluteVelocity)?;
    ensure(
        z.secondary.kind == ConclusionKind::LocalizationVanishes && !z.secondary.holds && z.secondary.residual > FAIL_TOL,
        || format!("E_D should be nonzero, residual {:e}", z.secondary.residual),
    )?;
    Ok(format!(
        "{} sharp systems scanned, only zero_distinguished meets all five (trivial dynamics {:.1e}); NAV fails and max |E_D| = {:.1e}",
        ms.len(),
        z.conclusion_residual,
        z.secondary.residual
    ))
}

fn c3() -> Check {
    let nw = SystemSpec {
        spacing: Some(0.1),
        mass: Some(1.0),
        ..spec("newton_wigner", 256)
    };
    let leak = Experiment::Leakage {
        initial: None,
        gap: 3.0,
        probe_width: None,
        times: vec![0.0, 1.0],
    };
    let r = go(&config(vec![nw], vec![leak], 0))?;
    let ExperimentResult::Leakage { runs } = &r.results[0] else {
        return Err("no leakage result".into());
    };
    let rep = &runs[0].reports;
    ensure(rep.iter().all(|l| l.spacelike_clear && (l.gap - 3.0).abs() < 1e-12), || {
        "configuration not spacelike-clear at gap 3".into()
    })?;
    ensure(rep[0].leaked_probability == 0.0, || format!("t=0 leakage {:e}", rep[0].leaked_probability))?;
    ensure(rep[1].leaked_probability > 1e-12, || format!("t=1 leakage {:e}", rep[1].leaked_probability))?;
    Ok(format!(
        "N=256 a=0.1 gap 3: leakage {:.3e} at t=1, exactly {} at t=0",
        rep[1].leaked_probability, rep[0].leaked_probability
    ))
}

fn c4() -> Check {
    let p = TolerancePolicy::default();
    let mut summary = Vec::new();
    for name in ["newton_wigner", "standard_nonrelativistic"] {
        let sys = catalog::build_system(&spec(name, 64)).map_err(|e| e.to_string())?;
        let core = sys.core();
        let m = core.model();
        let cat = RegionCatalog::build(core, &p.region_pairs);
        let mut probe = Probe::new(core);
        let mut least = f64::INFINITY;
        for &(i, j) in &cat.disjoint_pairs {
            let (a, b) = (&cat.regions[i], &cat.regions[j]);
            let t = 0.1 * region_distance(m, a, b) / m.light_speed;
            let x = probe.op(a, 0.0).map_err(|e| e.to_string())?;
            let y = probe.op(b, t).map_err(|e| e.to_string())?;
            let c = commutator_norm(&x, &y).map_err(|e| e.to_string())?;
            ensure(c > FAIL_TOL, || format!("{name}: pair {:?} {:?} commutator {c:e}", a.sites(), b.sites()))?;
            least = least.min(c);
        }
        summary.push(format!("{name} min {least:.1e} over {} pairs", cat.disjoint_pairs.len()));
    }
    Ok(format!("commutators at t = 0.1 gap/c: {}", summary.join(", ")))
}

fn c5() -> Check {
    let dirac = SystemSpec {
        spacing: Some(0.1),
        mass: Some(1.0),
        ..spec("dirac_positive", 128)
    };
    let r = go(&config(vec![dirac], vec![Experiment::Busch { regions: None }, Experiment::Matrix], 0))?;
    let ExperimentResult::Busch { spectra } = &r.results[0] else {
        return Err("no Busch result".into());
    };
    let reps = &spectra[0].reports;
    ensure(!reps.is_empty(), || "no regions".into())?;
    for b in reps {
        ensure(b.gap_to_one > PASS_TOL && b.max_eigenvalue > PASS_TOL, || {
            format!("region {:?}: max eigenvalue {} gap {:e}", b.region.sites(), b.max_eigenvalue, b.gap_to_one)
        })?;
    }
    let m = r.matrices().next().unwrap();
    passes(m, ConditionId::Additivity, TIGHT_TOL)?;
    fails(m, ConditionId::Microcausality)?;
    let min_gap = reps.iter().map(|b| b.gap_to_one).fold(f64::INFINITY, f64::min);
    let min_top = reps.iter().map(|b| b.max_eigenvalue).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} regions: min gap to 1 {min_gap:.2e}, min top eigenvalue {min_top:.3}, additivity {:.1e}, microcausality {:.2e}",
        reps.len(),
        residual(m, ConditionId::Additivity),
        residual(m, ConditionId::Microcausality)
    ))
}

fn c6() -> Check {
    let ms = matrices(vec![spec("cylinder_threshold", 64)])?;
    let m = &ms[0];
    for c in [ConditionId::Localizability, ConditionId::Covariance, ConditionId::EnergyBoundedBelow] {
        passes(m, c, PASS_TOL)?;
    }
    for c in [ConditionId::Monotonicity, ConditionId::ProbabilityConservation] {
        fails(m, c)?;
        let v = m.verdict(c);
        ensure((v.residual - 1.0).abs() < 1e-12, || format!("{c} residual {:e}", v.residual))?;
        ensure(v.witness.as_ref().is_some_and(|w| !w.regions.is_empty()), || {
            format!("{c} witness has no regions")
        })?;
    }
    let w = m.verdict(ConditionId::Monotonicity).witness.as_ref().unwrap();
    Ok(format!(
        "monotonicity and conservation fail with residual 1; monotonicity witness spans {} regions",
        w.regions.len()
    ))
}

fn c7() -> Check {
    let ms = matrices(vec![spec("measure_effect", 64)])?;
    let m = &ms[0];
    let mut checked = Vec::new();
    for &c in &m.hypotheses {
        if m.verdict(c).outcome != Outcome::NotApplicable {
            passes(m, c, TIGHT_TOL)?;
            checked.push(c.as_str());
        }
    }
    ensure(m.hypotheses_hold, || "hypotheses should hold".into())?;
    ensure(m.conclusion_kind == ConclusionKind::EffectsVanish && !m.conclusion_holds, || {
        "effects should not vanish".into()
    })?;
    ensure(
        m.secondary.kind == ConclusionKind::TrivialDynamics && m.secondary.residual == 0.0,
        || format!("trivial dynamics residual {:e}", m.secondary.residual),
    )?;
    Ok(format!(
        "passes {}; max |A_D| = {:.2}; trivial dynamics residual exactly 0",
        checked.join(", "),
        m.conclusion_residual
    ))
}

fn c8() -> Check {
    let ms = matrices(vec![spec("lattice_fock", 256)])?;
    let m = &ms[0];
    for c in [ConditionId::Additivity, ConditionId::EnergyBoundedBelow, ConditionId::NumberConservation] {
        passes(m, c, TIGHT_TOL)?;
    }
    ensure(m.conclusion_kind == ConclusionKind::NumbersVanish && !m.conclusion_holds, || {
        "N_D should be nonzero".into()
    })?;
    fails(m, ConditionId::Microcausality)?;
    let w = m.verdict(ConditionId::Microcausality).witness.as_ref().unwrap();
    ensure(w.times.iter().any(|&t| t > 0.0), || "microcausality witness at t = 0".into())?;
    Ok(format!(
        "L=8: number conservation {:.1e}, max |N_D| {:.1}, microcausality {:.2e} at t = {:?}",
        residual(m, ConditionId::NumberConservation),
        m.conclusion_residual,
        residual(m, ConditionId::Microcausality),
        w.times
    ))
}

fn c9() -> Check {
    let r = go(&config(
        vec![spec("zero_distinguished", 32), spec("newton_wigner", 32)],
        vec![
            Experiment::Hegerfeldt { instances: 100 },
            Experiment::Borchers { instances: 20 },
            Experiment::Lemmas,
        ],
        9,
    ))?;
    let (
        ExperimentResult::Hegerfeldt { summary: h },
        ExperimentResult::Borchers { summary: b },
        ExperimentResult::Lemmas { report: l },
    ) = (&r.results[0], &r.results[1], &r.results[2])
    else {
        return Err("unexpected result kinds".into());
    };
    let anomalous = h.count(ZeroSetClass::Anomalous);
    ensure(h.instances == 100 && anomalous == 0, || format!("{anomalous}/100 anomalous"))?;
    let witnesses = b.count(BorchersOutcome::ContrapositiveWitness);
    ensure(b.instances == 20 && witnesses == 20, || format!("{witnesses}/20 contrapositive witnesses"))?;
    let root = &l.root_lemma;
    ensure(root.checked > 0 && root.violations == 0 && root.max_residual <= TIGHT_TOL, || {
        format!("root lemma {root:?}")
    })?;
    Ok(format!(
        "anomalous 0/100, contrapositive witnesses 20/20, root lemma {} instances max residual {:.1e}",
        root.checked, root.max_residual
    ))
}

fn c10() -> Check {
    let systems: Vec<SystemSpec> = ["zero_distinguished", "newton_wigner", "frozen", "only_d0", "cylinder_threshold"]
        .iter()
        .map(|n| spec(n, 16))
        .collect();
    let c = config(
        systems,
        vec![
            Experiment::Matrix,
            Experiment::Leakage {
                initial: None,
                gap: 4.0,
                probe_width: None,
                times: vec![0.0, 0.5, 1.0],
            },
            Experiment::Hegerfeldt { instances: 10 },
            Experiment::Borchers { instances: 5 },
            Experiment::Lemmas,
        ],
        1234,
    );
    let a = go(&c)?.to_json();
    let b = go(&c)?.to_json();
    ensure(a == b, || "reports differ between runs".into())?;
    let parsed = ReportDocument::from_json(&a).map_err(|e| e.to_string())?;
    ensure(parsed.to_json() == a && parsed == go(&c)?, || "JSON round trip changed the report".into())?;
    let verdicts: usize = parsed.matrices().map(|m| m.verdicts.len()).sum();
    let rows = csv_rows(&parsed);
    let matrix_rows = rows.iter().filter(|r| r.experiment == "matrix").count();
    ensure(matrix_rows == verdicts && verdicts == 5 * ConditionId::ALL.len(), || {
        format!("{matrix_rows} matrix rows for {verdicts} verdicts")
    })?;
    Ok(format!(
        "{} byte report identical across runs, round trip exact, {matrix_rows} CSV rows for {verdicts} verdicts",
        a.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("indispensability matrix", c1),
        ("trivial dynamics consistency", c2),
        ("superluminal spreading", c3),
        ("microcausality failure", c4),
        ("busch effects", c5),
        ("cylinder threshold pathology", c6),
        ("measure effect", c7),
        ("lattice fock control", c8),
        ("lemma suites", c9),
        ("infrastructure", c10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{:.1} s]", i + 1, t.elapsed().as_secs_f64());
    }
    let total = start.elapsed().as_secs_f64();
    println!("{} of {} criteria passed in {total:.1} s", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
