//! CSV sweeps of a functional over a parameter grid.

use std::path::Path;

use heinz_core::functionals::Functional;
use heinz_core::{Evaluator, MeanTriple, NormKind};

use crate::error::{config_error, CliError, Result};

/// How to build the triple a sweep runs on.
#[derive(Clone, Debug, PartialEq)]
pub enum TripleSpec {
    /// `A = B = X = I_n`.
    Identity(usize),
    /// `MeanTriple::random(dim, m, M, seed)`.
    Random {
        dim: usize,
        seed: u64,
        bounds: (f64, f64),
    },
}

impl TripleSpec {
    pub fn build(&self) -> Result<MeanTriple> {
        match *self {
            TripleSpec::Identity(0) => Err(config_error("dim: must be positive")),
            TripleSpec::Identity(n) => Ok(MeanTriple::identity(n)),
            TripleSpec::Random { dim, seed, bounds } => {
                if dim == 0 {
                    return Err(config_error("dim: must be positive"));
                }
                Ok(MeanTriple::random(dim, bounds.0, bounds.1, seed)?)
            }
        }
    }
}

/// `param,value` rows, 17 significant digits, LF endings.
pub fn sweep_csv(
    t: &MeanTriple,
    k: NormKind,
    functional: Functional,
    grid: &[f64],
) -> Result<String> {
    if grid.is_empty() {
        return Err(config_error("grid: must not be empty"));
    }
    if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(config_error(format!("grid: value {bad} is not finite")));
    }
    if let Functional::Phi { .. } = functional {
        if let Some(bad) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(config_error(format!(
                "grid: value {bad} is outside [0, 1] required by phi"
            )));
        }
    }
    let ev = Evaluator::new(t);
    let mut out = String::from("param,value\n");
    for &x in grid {
        let v = ev.value(functional, k, x)?;
        out.push_str(&format!("{x:.16e},{v:.16e}\n"));
    }
    Ok(out)
}

pub fn emit_sweep(
    spec: &TripleSpec,
    k: NormKind,
    functional: Functional,
    grid: &[f64],
    out: &Path,
) -> Result<()> {
    let csv = sweep_csv(&spec.build()?, k, functional, grid)?;
    std::fs::write(out, csv).map_err(|source| CliError::Io {
        path: out.to_owned(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(csv: &str) -> Vec<f64> {
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    }

    #[test]
    fn k_at_half_is_zero() {
        let t = TripleSpec::Random {
            dim: 3,
            seed: 4,
            bounds: (0.1, 10.0),
        }
        .build()
        .unwrap();
        let csv = sweep_csv(&t, NormKind::Trace, Functional::K, &[0.5]).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(column(&csv)[0].abs() < 1e-12);
    }

    #[test]
    fn identity_f_is_constant() {
        let t = TripleSpec::Identity(2).build().unwrap();
        let csv = sweep_csv(
            &t,
            NormKind::Schatten(2.0),
            Functional::F,
            &[-1.0, 0.0, 0.3, 2.0],
        )
        .unwrap();
        assert!(column(&csv).iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-15));
        assert!(csv.starts_with("param,value\n"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn g_is_nondecreasing() {
        let t = TripleSpec::Random {
            dim: 4,
            seed: 9,
            bounds: (0.1, 10.0),
        }
        .build()
        .unwrap();
        let csv = sweep_csv(&t, NormKind::Operator, Functional::G, &[0.5, 1.0, 2.0, 4.0]).unwrap();
        let v = column(&csv);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn seventeen_digits() {
        let t = TripleSpec::Identity(2).build().unwrap();
        let csv = sweep_csv(&t, NormKind::Schatten(2.0), Functional::F, &[0.25]).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let value = row.split(',').nth(1).unwrap();
        let mantissa = value.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
        assert_eq!(value.parse::<f64>().unwrap(), 2f64.sqrt());
    }

    #[test]
    fn grid_validation() {
        let t = TripleSpec::Identity(2).build().unwrap();
        assert!(sweep_csv(&t, NormKind::Trace, Functional::Phi { r: 1.0 }, &[1.5]).is_err());
        assert!(sweep_csv(&t, NormKind::Trace, Functional::F, &[]).is_err());
        assert!(sweep_csv(&t, NormKind::Trace, Functional::F, &[f64::NAN]).is_err());
        assert!(TripleSpec::Identity(0).build().is_err());
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("missing").join("sweep.csv");
        let err = emit_sweep(
            &TripleSpec::Identity(2),
            NormKind::Trace,
            Functional::F,
            &[0.5],
            &out,
        )
        .unwrap_err();
        assert!(err.to_string().contains("sweep.csv"));
        let ok = dir.path().join("sweep.csv");
        emit_sweep(
            &TripleSpec::Identity(2),
            NormKind::Trace,
            Functional::F,
            &[0.5],
            &ok,
        )
        .unwrap();
        assert!(std::fs::read_to_string(ok)
            .unwrap()
            .starts_with("param,value\n"));
    }
}
