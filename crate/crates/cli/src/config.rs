//! Suite configuration and its resolution into concrete parameter grids.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use heinz_core::functionals::CorollaryBranch;
use heinz_core::NormKind;
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliError, Result};

/// Run configuration. Grids left as `None` fall back to each suite's
/// default; a supplied grid is used by every selected suite that takes
/// that parameter and must lie in each such suite's domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub norms: Vec<NormKind>,
    pub nu_grid: Option<Vec<f64>>,
    pub alpha_grid: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub s_grid: Option<Vec<f64>>,
    pub spectrum_bounds: (f64, f64),
    pub tolerance_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: vec!["all".into()],
            dims: vec![2, 3, 4, 6],
            trials: 1000,
            seed: 1,
            norms: NormKind::TEST_SET.to_vec(),
            nu_grid: None,
            alpha_grid: None,
            r_grid: None,
            s_grid: None,
            spectrum_bounds: (0.1, 10.0),
            tolerance_scale: 1.0,
        }
    }
}

impl SuiteConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }
}

/// One runnable suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteKind {
    T1,
    T1Integral,
    T20,
    KantorovichS2,
    T2,
    T2Integral,
    HeinzDiffClassical,
    GenDiff,
    PowerDiff,
    ReverseHeinz,
    ConvexityExtension,
    CorollarySum,
    JensenBounds,
    HermiteHadamardGap,
    Conde,
    IntegralRefinement,
    T3,
    T4,
    HiaiZhan,
    CsRefinement,
    SchurNormBound,
    Zou,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 22] = [
        SuiteKind::T1,
        SuiteKind::T1Integral,
        SuiteKind::T20,
        SuiteKind::KantorovichS2,
        SuiteKind::T2,
        SuiteKind::T2Integral,
        SuiteKind::HeinzDiffClassical,
        SuiteKind::GenDiff,
        SuiteKind::PowerDiff,
        SuiteKind::ReverseHeinz,
        SuiteKind::ConvexityExtension,
        SuiteKind::CorollarySum,
        SuiteKind::JensenBounds,
        SuiteKind::HermiteHadamardGap,
        SuiteKind::Conde,
        SuiteKind::IntegralRefinement,
        SuiteKind::T3,
        SuiteKind::T4,
        SuiteKind::HiaiZhan,
        SuiteKind::CsRefinement,
        SuiteKind::SchurNormBound,
        SuiteKind::Zou,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::T1 => "check_t1",
            SuiteKind::T1Integral => "check_t1_integral",
            SuiteKind::T20 => "check_t20",
            SuiteKind::KantorovichS2 => "check_kantorovich_s2",
            SuiteKind::T2 => "check_t2",
            SuiteKind::T2Integral => "check_t2_integral",
            SuiteKind::HeinzDiffClassical => "check_heinz_diff_classical",
            SuiteKind::GenDiff => "check_gen_diff",
            SuiteKind::PowerDiff => "check_power_diff",
            SuiteKind::ReverseHeinz => "check_reverse_heinz",
            SuiteKind::ConvexityExtension => "check_convexity_extension",
            SuiteKind::CorollarySum => "check_corollary_sum",
            SuiteKind::JensenBounds => "check_jensen_bounds",
            SuiteKind::HermiteHadamardGap => "check_hermite_hadamard_gap",
            SuiteKind::Conde => "check_conde",
            SuiteKind::IntegralRefinement => "check_integral_refinement",
            SuiteKind::T3 => "check_t3",
            SuiteKind::T4 => "check_t4",
            SuiteKind::HiaiZhan => "check_hiai_zhan",
            SuiteKind::CsRefinement => "check_cs_refinement",
            SuiteKind::SchurNormBound => "check_schur_norm_bound",
            SuiteKind::Zou => "zou",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = CliError;

    /// Canonical names, with or without the `check_` prefix.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let full = if s.starts_with("check_") || s == "zou" {
            s.to_owned()
        } else {
            format!("check_{s}")
        };
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == full)
            .ok_or_else(|| config_error(format!("suites: unknown suite '{s}'")))
    }
}

/// Concrete grids for every suite, after defaults and overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub suites: Vec<SuiteKind>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub norms: Vec<NormKind>,
    pub tolerance_scale: f64,
    pub spectrum_bounds: (f64, f64),
    /// ν for t1, t20, t2, conde, t3.
    pub mid_nu: Vec<f64>,
    /// ν for the Kantorovich and classical difference suites.
    pub unit_nu: Vec<f64>,
    /// α for t1, t1_integral, t20, conde, integral_refinement.
    pub alpha: Vec<f64>,
    /// `(α, ν grid)` for the generalized difference suite.
    pub gen_diff: Vec<(f64, Vec<f64>)>,
    pub power_r: Vec<f64>,
    pub reverse_nu: Vec<f64>,
    pub convexity_grid: Vec<f64>,
    pub corollary: Vec<(f64, CorollaryBranch)>,
    pub corollary_n: Vec<usize>,
    /// λ for the Jensen bounds, applied to `F` and `K` on `(1/4, 1/2)`.
    pub jensen_lambda: Vec<f64>,
    /// `s` for the φ suites.
    pub s: Vec<f64>,
    /// `r` for the φ suites.
    pub phi_r: Vec<f64>,
    /// Löwner exponents used to build Schur multipliers.
    pub schur_r: Vec<f64>,
}

pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points)
            .map(|i| {
                if i + 1 == points {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

const GRID_POINTS: usize = 9;

struct Domain {
    label: &'static str,
    test: fn(f64) -> bool,
}

fn check_grid(field: &str, grid: &[f64], suite: SuiteKind, domain: &Domain) -> Result<()> {
    if let Some(bad) = grid.iter().find(|&&v| !v.is_finite() || !(domain.test)(v)) {
        return Err(config_error(format!(
            "{field}: value {bad} is outside {} required by {suite}",
            domain.label
        )));
    }
    Ok(())
}

const MID_NU: Domain = Domain {
    label: "[1/4, 3/4]",
    test: |v| (0.25..=0.75).contains(&v),
};
const UNIT: Domain = Domain {
    label: "[0, 1]",
    test: |v| (0.0..=1.0).contains(&v),
};
const OUTSIDE_UNIT: Domain = Domain {
    label: "the complement of [0, 1]",
    test: |v| !(0.0..=1.0).contains(&v),
};
const ALPHA_HALF: Domain = Domain {
    label: "[1/2, inf)",
    test: |v| v >= 0.5,
};
const ALPHA_ONE: Domain = Domain {
    label: "[1, inf)",
    test: |v| v >= 1.0,
};
const HALF_OPEN_UNIT: Domain = Domain {
    label: "(0, 1]",
    test: |v| v > 0.0 && v <= 1.0,
};
const POSITIVE: Domain = Domain {
    label: "(0, inf)",
    test: |v| v > 0.0,
};
const COROLLARY: Domain = Domain {
    label: "[0, inf) or (-inf, -1]",
    test: |v| v >= 0.0 || v <= -1.0,
};
const ANY: Domain = Domain {
    label: "the reals",
    test: |_| true,
};

impl SuiteConfig {
    /// Validates the configuration and resolves every grid.
    pub fn plan(&self) -> Result<Plan> {
        let suites = self.resolve_suites()?;
        if self.dims.is_empty() {
            return Err(config_error("dims: must not be empty"));
        }
        if let Some(d) = self.dims.iter().find(|d| !(1..=16).contains(*d)) {
            return Err(config_error(format!("dims: {d} is outside [1, 16]")));
        }
        if self.trials == 0 {
            return Err(config_error("trials: must be positive"));
        }
        if self.norms.is_empty() {
            return Err(config_error("norms: must not be empty"));
        }
        for n in &self.norms {
            n.validate()
                .map_err(|e| config_error(format!("norms: {e}")))?;
        }
        let (m, big_m) = self.spectrum_bounds;
        if !(m > 0.0 && m <= big_m && big_m.is_finite()) {
            return Err(config_error(format!(
                "spectrum_bounds: need 0 < m <= M, got ({m}, {big_m})"
            )));
        }
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(config_error(format!(
                "tolerance_scale: must be positive, got {}",
                self.tolerance_scale
            )));
        }
        for (field, grid) in [
            ("nu_grid", &self.nu_grid),
            ("alpha_grid", &self.alpha_grid),
            ("r_grid", &self.r_grid),
            ("s_grid", &self.s_grid),
        ] {
            if grid.as_ref().is_some_and(|g| g.is_empty()) {
                return Err(config_error(format!("{field}: must not be empty")));
            }
        }

        let selected = |k: SuiteKind| suites.contains(&k);
        let validate =
            |field: &str, grid: &Option<Vec<f64>>, users: &[(SuiteKind, &Domain)]| -> Result<()> {
                if let Some(g) = grid {
                    for (suite, domain) in users {
                        if selected(*suite) {
                            check_grid(field, g, *suite, domain)?;
                        }
                    }
                }
                Ok(())
            };

        use SuiteKind::*;
        validate(
            "nu_grid",
            &self.nu_grid,
            &[
                (T1, &MID_NU),
                (T20, &MID_NU),
                (T2, &MID_NU),
                (Conde, &MID_NU),
                (T3, &MID_NU),
                (KantorovichS2, &UNIT),
                (HeinzDiffClassical, &UNIT),
                (ReverseHeinz, &OUTSIDE_UNIT),
                (CorollarySum, &COROLLARY),
                (ConvexityExtension, &ANY),
            ],
        )?;
        validate(
            "alpha_grid",
            &self.alpha_grid,
            &[
                (T1, &ALPHA_HALF),
                (T1Integral, &ALPHA_HALF),
                (T20, &ALPHA_HALF),
                (Conde, &ALPHA_HALF),
                (IntegralRefinement, &ALPHA_HALF),
                (GenDiff, &ALPHA_ONE),
            ],
        )?;
        validate(
            "r_grid",
            &self.r_grid,
            &[
                (PowerDiff, &HALF_OPEN_UNIT),
                (HiaiZhan, &POSITIVE),
                (CsRefinement, &POSITIVE),
                (SchurNormBound, &UNIT),
            ],
        )?;
        validate(
            "s_grid",
            &self.s_grid,
            &[
                (HiaiZhan, &UNIT),
                (CsRefinement, &UNIT),
                (JensenBounds, &UNIT),
            ],
        )?;

        if selected(ConvexityExtension) {
            if let Some(g) = &self.nu_grid {
                if g.len() < 3 || !g.windows(2).all(|w| w[0] < w[1]) {
                    return Err(config_error(format!(
                        "nu_grid: {ConvexityExtension} needs at least 3 strictly increasing points"
                    )));
                }
            }
        }

        let alpha_default = vec![0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0];
        let gen_alphas = match &self.alpha_grid {
            Some(g) => g.clone(),
            None => vec![1.0, 1.5, 2.0, 3.0],
        };
        let mut gen_diff = Vec::with_capacity(gen_alphas.len());
        for alpha in gen_alphas {
            let (lo, hi) = ((1.0 - alpha) / 2.0, (1.0 + alpha) / 2.0);
            let nus = match &self.nu_grid {
                Some(g) => {
                    if selected(GenDiff) {
                        if let Some(bad) = g.iter().find(|v| !(lo..=hi).contains(*v)) {
                            return Err(config_error(format!(
                                "nu_grid: value {bad} is outside [{lo}, {hi}] required by {GenDiff} at alpha = {alpha}"
                            )));
                        }
                    }
                    g.clone()
                }
                None => linspace(lo, hi, GRID_POINTS),
            };
            gen_diff.push((alpha, nus));
        }

        let corollary = match &self.nu_grid {
            Some(g) => g
                .iter()
                .filter(|&&v| v >= 0.0 || v <= -1.0)
                .map(|&v| {
                    (
                        v,
                        if v >= 0.0 {
                            CorollaryBranch::Nonneg
                        } else {
                            CorollaryBranch::LeMinusOne
                        },
                    )
                })
                .collect(),
            None => [0.0, 0.25, 0.5, 1.0, 2.0]
                .map(|v| (v, CorollaryBranch::Nonneg))
                .into_iter()
                .chain([-1.0, -1.5, -2.0, -3.0].map(|v| (v, CorollaryBranch::LeMinusOne)))
                .collect(),
        };

        let or = |grid: &Option<Vec<f64>>, default: Vec<f64>| grid.clone().unwrap_or(default);
        Ok(Plan {
            suites,
            dims: self.dims.clone(),
            trials: self.trials,
            seed: self.seed,
            norms: self.norms.clone(),
            tolerance_scale: self.tolerance_scale,
            spectrum_bounds: self.spectrum_bounds,
            mid_nu: or(&self.nu_grid, linspace(0.25, 0.75, GRID_POINTS)),
            unit_nu: or(&self.nu_grid, linspace(0.0, 1.0, GRID_POINTS)),
            alpha: or(&self.alpha_grid, alpha_default),
            gen_diff,
            power_r: or(&self.r_grid, linspace(0.1, 1.0, 10)),
            reverse_nu: or(
                &self.nu_grid,
                vec![-2.0, -1.5, -1.0, -0.5, -0.1, 1.1, 1.5, 2.0, 3.0],
            ),
            convexity_grid: or(&self.nu_grid, linspace(-2.0, 3.0, 21)),
            corollary,
            corollary_n: vec![1, 2, 3, 4],
            jensen_lambda: or(&self.s_grid, linspace(0.0, 1.0, GRID_POINTS)),
            s: or(&self.s_grid, linspace(0.0, 1.0, GRID_POINTS)),
            phi_r: or(
                &self.r_grid,
                vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0],
            ),
            schur_r: or(&self.r_grid, linspace(0.0, 1.0, GRID_POINTS)),
        })
    }

    fn resolve_suites(&self) -> Result<Vec<SuiteKind>> {
        if self.suites.is_empty() {
            return Err(config_error("suites: must not be empty"));
        }
        let mut out = Vec::new();
        for name in &self.suites {
            if name.trim() == "all" {
                out.extend(SuiteKind::ALL);
            } else {
                out.push(name.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}
