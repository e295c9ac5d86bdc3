use loclab_core::axioms::{ConditionId, Outcome};
use loclab_runner::config::ExperimentConfig;
use loclab_runner::export::{export, to_csv};
use loclab_runner::{run, Format, ReportDocument, RunError};

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(text).unwrap()
}

#[test]
fn zero_hamiltonian_passes_all_five() {
    let r = run(&config(
        r#"{"systems":[{"name":"zero_distinguished","size":16}],"experiments":[{"kind":"matrix"}]}"#,
    ))
    .unwrap();
    let m = r.matrices().next().unwrap();
    for c in [
        ConditionId::Localizability,
        ConditionId::Covariance,
        ConditionId::EnergyBoundedBelow,
        ConditionId::Microcausality,
        ConditionId::ProbabilityConservation,
    ] {
        assert_eq!(m.verdict(c).outcome, Outcome::Pass, "{c}");
    }
    assert!(m.conclusion_holds);
}

#[test]
fn same_seed_same_bytes() {
    let c = config(
        r#"{"systems":[{"name":"newton_wigner","size":16}],
            "experiments":[{"kind":"matrix"},{"kind":"hegerfeldt","instances":4},{"kind":"borchers","instances":4},{"kind":"lemmas"}],
            "seed":77}"#,
    );
    let a = export(&run(&c).unwrap(), Format::Json).unwrap();
    let b = export(&run(&c).unwrap(), Format::Json).unwrap();
    assert_eq!(a, b);
    assert_eq!(ReportDocument::from_json(&a).unwrap(), run(&c).unwrap());
}

#[test]
fn unknown_system_is_a_named_error() {
    let c = ExperimentConfig::from_json(r#"{"systems":[{"name":"foo"}],"experiments":[{"kind":"matrix"}]}"#);
    assert!(matches!(c, Err(RunError::UnknownSystem(ref n)) if n == "foo"));
}

#[test]
fn csv_rows_per_condition() {
    let r = run(&config(
        r#"{"systems":[{"name":"standard_nonrelativistic","size":16},{"name":"newton_wigner","size":16},
                       {"name":"momentum_hamiltonian","size":16},{"name":"frozen","size":16},{"name":"only_d0","size":16}],
            "experiments":[{"kind":"matrix"}]}"#,
    ))
    .unwrap();
    let csv = to_csv(&r).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * ConditionId::ALL.len());
}
