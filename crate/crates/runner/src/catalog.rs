//! Registry of constructible systems.

use loclab_core::modelzoo::{self, AnySystem, Dispersion, PathologyMode, ZooError};
use loclab_core::spacetime::{Region, SpaceKind, SpaceModel};
use serde::{Deserialize, Serialize};

use crate::config::SystemSpec;
use crate::error::{Result, RunError};

pub const MIN_SIZE: usize = 16;
pub const MAX_SIZE: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Power of two in `[16, 512]`; for Fock space this is `2^L`.
    Size,
    Spacing,
    Mass,
    Hopping,
    Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSchema {
    pub name: String,
    pub kind: ParamKind,
    pub default: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub variant: String,
    pub space: SpaceKind,
    pub description: String,
    pub provenance: String,
    pub parameters: Vec<ParamSchema>,
}

struct Blueprint {
    name: &'static str,
    variant: &'static str,
    space: SpaceKind,
    description: &'static str,
    provenance: &'static str,
    size: usize,
    spacing: f64,
    mass: bool,
    hopping: bool,
    region: bool,
    max_size: usize,
}

const fn bp(name: &'static str, variant: &'static str, space: SpaceKind, description: &'static str, provenance: &'static str) -> Blueprint {
    Blueprint {
        name,
        variant,
        space,
        description,
        provenance,
        size: 64,
        spacing: 1.0,
        mass: false,
        hopping: false,
        region: false,
        max_size: MAX_SIZE,
    }
}

const fn with_mass(mut b: Blueprint) -> Blueprint {
    b.mass = true;
    b
}

const fn with_region(mut b: Blueprint) -> Blueprint {
    b.region = true;
    b
}

const BLUEPRINTS: &[Blueprint] = &[
    bp(
        "zero_distinguished",
        "sharp",
        SpaceKind::LineDistinguishedFrame,
        "position projections with vanishing Hamiltonian in a preferred rest frame",
        "Newtonian spacetime with a distinguished frame: every sharp-localization condition holds, no-absolute-velocity fails, and the projections stay nonzero",
    ),
    bp(
        "zero_isotropic",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projections with vanishing Hamiltonian on an isotropic line",
        "boosted generators of a static system reduce to -b_x P, which is unbounded below",
    ),
    with_mass(bp(
        "standard_nonrelativistic",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projections, H = P^2/2m",
        "standard localization with non-relativistic dispersion: violates microcausality only",
    )),
    with_mass(bp(
        "newton_wigner",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projections, H = sqrt(P^2 + m^2)",
        "Newton-Wigner style localization with relativistic dispersion: violates microcausality only",
    )),
    bp(
        "momentum_hamiltonian",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projections, H = P",
        "chiral dynamics generated by momentum: causal and covariant, energy unbounded below",
    ),
    with_mass(bp(
        "frozen",
        "sharp",
        SpaceKind::LineIsotropic,
        "time-independent position projections under relativistic dynamics",
        "localization that ignores the dynamics: violates time covariance only",
    )),
    with_region(with_mass(bp(
        "only_d0",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projection on one region, zero elsewhere",
        "pathological assignment: violates probability conservation only",
    ))),
    with_region(with_mass(bp(
        "all_but_d0",
        "sharp",
        SpaceKind::LineIsotropic,
        "position projection on one region, identity elsewhere",
        "pathological assignment: violates localizability only",
    ))),
    Blueprint {
        size: 16,
        max_size: modelzoo::MAX_TENSOR_SITES,
        ..with_region(with_mass(bp(
            "tensor_counterexample",
            "sharp",
            SpaceKind::LineDistinguishedFrame,
            "E_D (x) E_D0 on two copies of the line, dynamics on the second factor",
            "strong causality without instantaneous-spreading control: satisfies strong causality, fails NIWS",
        )))
    },
    bp(
        "cylinder_threshold",
        "sharp",
        SpaceKind::Circle,
        "E = I when a region covers at least two thirds of the circle, else 0",
        "threshold localization on a cylinder spacetime: fails monotonicity and probability conservation",
    ),
    bp(
        "measure_effect",
        "unsharp",
        SpaceKind::Circle,
        "A = mu(D) I with the normalized counting measure",
        "unsharp localization on a cylinder spacetime with nonzero effects and trivial dynamics",
    ),
    Blueprint {
        size: 64,
        spacing: 0.1,
        ..with_mass(bp(
            "dirac_positive",
            "unsharp",
            SpaceKind::LineIsotropic,
            "spinor position projections compressed to positive Dirac energies",
            "positive-energy Dirac localization: effects with spectrum strictly inside (0, 1), microcausality fails",
        ))
    },
    Blueprint {
        size: 256,
        hopping: true,
        ..bp(
            "lattice_fock",
            "number",
            SpaceKind::LineDistinguishedFrame,
            "site occupation numbers of free lattice fermions, Fock dimension = size",
            "non-relativistic second quantization: number conservation holds, microcausality fails",
        )
    },
];

fn blueprint(name: &str) -> Result<&'static Blueprint> {
    BLUEPRINTS
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| RunError::UnknownSystem(name.to_string()))
}

/// One entry per constructible system, in a fixed order.
pub fn list_systems() -> Vec<CatalogEntry> {
    BLUEPRINTS
        .iter()
        .map(|b| {
            let mut parameters = vec![
                ParamSchema {
                    name: "size".into(),
                    kind: ParamKind::Size,
                    default: b.size.into(),
                },
                ParamSchema {
                    name: "spacing".into(),
                    kind: ParamKind::Spacing,
                    default: b.spacing.into(),
                },
            ];
            if b.mass {
                parameters.push(ParamSchema {
                    name: "mass".into(),
                    kind: ParamKind::Mass,
                    default: 1.0.into(),
                });
            }
            if b.hopping {
                parameters.push(ParamSchema {
                    name: "hopping".into(),
                    kind: ParamKind::Hopping,
                    default: 1.0.into(),
                });
            }
            if b.region {
                parameters.push(ParamSchema {
                    name: "d0".into(),
                    kind: ParamKind::Region,
                    default: serde_json::Value::Null,
                });
            }
            CatalogEntry {
                name: b.name.to_string(),
                variant: b.variant.to_string(),
                space: b.space,
                description: b.description.to_string(),
                provenance: b.provenance.to_string(),
                parameters,
            }
        })
        .collect()
}

/// Parameters of a spec with catalog defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub name: String,
    pub size: usize,
    pub spacing: f64,
    pub mass: f64,
    pub hopping: f64,
    pub d0: Option<Region>,
}

pub fn resolve(spec: &SystemSpec) -> Result<Resolved> {
    let b = blueprint(&spec.name)?;
    let size = spec.size.unwrap_or(b.size);
    let infeasible = |reason: String| RunError::InfeasibleSize {
        system: spec.name.clone(),
        size,
        reason,
    };
    if !size.is_power_of_two() || !(MIN_SIZE..=MAX_SIZE).contains(&size) {
        return Err(infeasible(format!("must be a power of two in [{MIN_SIZE}, {MAX_SIZE}]")));
    }
    if size > b.max_size {
        return Err(infeasible(format!("this system allows at most {}", b.max_size)));
    }
    let invalid = |reason: &str| RunError::InvalidParameter {
        system: spec.name.clone(),
        reason: reason.to_string(),
    };
    let reject_unused = |given: bool, allowed: bool, what: &str| {
        if given && !allowed {
            Err(invalid(&format!("takes no {what} parameter")))
        } else {
            Ok(())
        }
    };
    reject_unused(spec.mass.is_some(), b.mass, "mass")?;
    reject_unused(spec.hopping.is_some(), b.hopping, "hopping")?;
    reject_unused(spec.d0.is_some(), b.region, "d0")?;
    let spacing = spec.spacing.unwrap_or(b.spacing);
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(invalid("spacing must be positive and finite"));
    }
    Ok(Resolved {
        name: spec.name.clone(),
        size,
        spacing,
        mass: spec.mass.unwrap_or(1.0),
        hopping: spec.hopping.unwrap_or(1.0),
        d0: spec.d0.clone(),
    })
}

/// Constructs the system a spec describes.
pub fn build_system(spec: &SystemSpec) -> Result<AnySystem> {
    let r = resolve(spec)?;
    let b = blueprint(&r.name)?;
    let name = r.name.clone();
    let zoo = |e: ZooError| match e {
        ZooError::InvalidRegion(reason) => RunError::InvalidRegion {
            system: name.clone(),
            reason,
        },
        ZooError::TooLarge { .. } => RunError::InfeasibleSize {
            system: name.clone(),
            size: r.size,
            reason: e.to_string(),
        },
        other => RunError::InvalidParameter {
            system: name.clone(),
            reason: other.to_string(),
        },
    };
    if b.name == "lattice_fock" {
        let sites = r.size.trailing_zeros() as usize;
        return modelzoo::build_lattice_fock(sites, r.hopping).map(Into::into).map_err(zoo);
    }
    let m = SpaceModel::new(b.space, r.size, r.spacing).map_err(|e| zoo(e.into()))?;
    let d0 = match &r.d0 {
        Some(d) => {
            if d.is_empty() || d.len() >= r.size || d.sites().iter().any(|&x| x >= r.size) {
                return Err(RunError::InvalidRegion {
                    system: name,
                    reason: format!("d0 {:?} must be a nonempty proper subset of 0..{}", d.sites(), r.size),
                });
            }
            d.clone()
        }
        None => modelzoo::default_d0(&m),
    };
    let mass = r.mass;
    let built: std::result::Result<AnySystem, ZooError> = match b.name {
        "zero_distinguished" | "zero_isotropic" => modelzoo::build_standard(&m, Dispersion::Zero).map(Into::into),
        "standard_nonrelativistic" => {
            modelzoo::build_standard(&m, Dispersion::NonRelativistic { mass }).map(Into::into)
        }
        "newton_wigner" => modelzoo::build_standard(&m, Dispersion::Relativistic { mass }).map(Into::into),
        "momentum_hamiltonian" => modelzoo::build_standard(&m, Dispersion::Momentum).map(Into::into),
        "frozen" => modelzoo::build_frozen(&m, mass).map(Into::into),
        "only_d0" => modelzoo::build_pathological(&m, mass, &d0, PathologyMode::OnlyD0).map(Into::into),
        "all_but_d0" => modelzoo::build_pathological(&m, mass, &d0, PathologyMode::AllButD0).map(Into::into),
        "tensor_counterexample" => modelzoo::build_tensor_counterexample(&m, mass, &d0).map(Into::into),
        "cylinder_threshold" => modelzoo::build_cylinder_threshold(&m).map(Into::into),
        "measure_effect" => modelzoo::build_measure_effect(&m).map(Into::into),
        "dirac_positive" => modelzoo::build_dirac_positive(&m, mass).map(Into::into),
        other => return Err(RunError::UnknownSystem(other.to_string())),
    };
    built.map_err(zoo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(name: &str) -> SystemSpec {
        SystemSpec::named(name)
    }

    #[test]
    fn catalog_census() {
        let cat = list_systems();
        assert!(cat.len() >= 10);
        let cyl = cat.iter().find(|e| e.name == "cylinder_threshold").unwrap();
        assert!(cyl.provenance.contains("cylinder"));
        let mut names: Vec<&str> = cat.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), cat.len());
    }

    #[test]
    fn every_entry_builds_with_its_defaults() {
        for entry in list_systems() {
            let mut s = spec(&entry.name);
            for p in &entry.parameters {
                match p.kind {
                    ParamKind::Size => s.size = Some(16),
                    ParamKind::Spacing => s.spacing = p.default.as_f64(),
                    ParamKind::Mass => s.mass = p.default.as_f64(),
                    ParamKind::Hopping => s.hopping = p.default.as_f64(),
                    ParamKind::Region => {}
                }
            }
            let sys = build_system(&s).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            let expected = match entry.variant.as_str() {
                "sharp" => loclab_core::modelzoo::Variant::Sharp,
                "unsharp" => loclab_core::modelzoo::Variant::Unsharp,
                _ => loclab_core::modelzoo::Variant::Number,
            };
            assert_eq!(sys.core().variant(), expected, "{}", entry.name);
        }
    }

    #[test]
    fn named_errors() {
        assert!(matches!(build_system(&spec("foo")), Err(RunError::UnknownSystem(_))));
        let mut s = spec("newton_wigner");
        s.size = Some(48);
        assert!(matches!(build_system(&s), Err(RunError::InfeasibleSize { .. })));
        s.size = Some(1024);
        assert!(matches!(build_system(&s), Err(RunError::InfeasibleSize { .. })));
        let mut t = spec("tensor_counterexample");
        t.size = Some(64);
        assert!(matches!(build_system(&t), Err(RunError::InfeasibleSize { .. })));
        let mut d = spec("only_d0");
        d.d0 = Some(Region::new([70]));
        assert!(matches!(build_system(&d), Err(RunError::InvalidRegion { .. })));
        let mut m = spec("frozen");
        m.mass = Some(-1.0);
        assert!(matches!(build_system(&m), Err(RunError::InvalidParameter { .. })));
        let mut c = spec("cylinder_threshold");
        c.mass = Some(1.0);
        assert!(matches!(build_system(&c), Err(RunError::InvalidParameter { .. })));
    }

    #[test]
    fn fock_size_is_the_space_dimension() {
        let mut s = spec("lattice_fock");
        s.size = Some(64);
        let sys = build_system(&s).unwrap();
        assert_eq!(sys.core().dim(), 64);
        assert_eq!(sys.core().model().sites, 6);
    }
}
