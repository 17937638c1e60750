use serde::Serialize;

use super::{ExperimentError, ExperimentKind};

/// A named, selectable component: a weight rule, shift family, path
/// generator, potential, decay function or experiment kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub name: String,
    pub category: &'static str,
    /// Parameter names, in config order.
    pub parameters: Vec<&'static str>,
}

fn entry(name: &str, category: &'static str, parameters: &[&'static str]) -> RegistryEntry {
    RegistryEntry { name: name.to_string(), category, parameters: parameters.to_vec() }
}

pub fn list_registry() -> Vec<RegistryEntry> {
    let mut out = vec![
        entry("shift:inverse-poly", "weight-rule", &["scale", "alpha"]),
        entry("shift:constant", "weight-rule", &["c"]),
        entry("shift:geometric", "weight-rule", &["q"]),
        entry("shift:alternating", "weight-rule", &["low"]),
        entry("family:smooth-inverse", "shift-family", &[]),
        entry("family:frozen", "shift-family", &["weights"]),
        entry("family:switch", "shift-family", &["at", "before", "after"]),
        entry("path:polynomial", "operator-path", &["coefficients"]),
        entry("path:random-linear", "operator-path", &["dim", "scale"]),
        entry("path:random-quadratic", "operator-path", &["dim", "scale"]),
        entry("path:scaled-unitary", "operator-path", &["dim"]),
        entry("path:sampled", "operator-path", &["files"]),
        entry("potential:zero", "potential", &["internal"]),
        entry("potential:gaussian", "potential", &["amplitude", "width", "internal"]),
        entry("potential:inverse-poly", "potential", &["amplitude", "k", "internal"]),
        entry("decay:zero", "decay-function", &[]),
        entry("decay:one", "decay-function", &[]),
        entry("decay:inverse-poly", "decay-function", &["k"]),
        entry("decay:gaussian", "decay-function", &["width"]),
        entry("form:weighted", "schatten-probe", &["p", "epsilon"]),
        entry("form:sandwich", "schatten-probe", &["s", "r", "epsilon"]),
    ];
    for kind in ExperimentKind::ALL {
        let params: &[&'static str] = match kind {
            ExperimentKind::VerifySymbolic => &["n_max"],
            ExperimentKind::IndexShift => &["rule", "n", "expected"],
            ExperimentKind::Homotopy => {
                &["chain_seeds", "chain_degree", "dim", "path_degree", "terms", "family", "n", "grid_points"]
            }
            ExperimentKind::Transgression => &["path", "n", "hypotheses", "grid_points"],
            ExperimentKind::Resolvent => &["dim", "instances", "lambda", "t", "s", "scale_d", "scale_a", "quadrature"],
            ExperimentKind::Derivative => &["dim", "instances", "lambda", "n", "t0", "h", "scale_d", "scale_a"],
            ExperimentKind::DiracSchatten => &["experiment", "expect_divergent"],
            ExperimentKind::Scaling => &["lattice", "potential", "lambdas"],
        };
        out.push(entry(&format!("kind:{}", kind.name()), "experiment-kind", params));
    }
    out
}

pub fn lookup(name: &str) -> Result<RegistryEntry, ExperimentError> {
    list_registry()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| ExperimentError::UnknownName(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_unique_and_resolvable() {
        let all = list_registry();
        let mut names: Vec<_> = all.iter().map(|e| e.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        assert_eq!(lookup("shift:inverse-poly").unwrap().parameters, vec!["scale", "alpha"]);
        assert_eq!(lookup("potential:gaussian").unwrap().category, "potential");
        assert!(matches!(lookup("shift:nope"), Err(ExperimentError::UnknownName(_))));
    }
}
