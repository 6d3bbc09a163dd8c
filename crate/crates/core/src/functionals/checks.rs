use crate::error::{range_error, Error, Result};
use crate::linalg::{is_psd, Matrix};
use crate::means::{kantorovich_factor, MeanTriple};
use crate::norms::{ui_norm, NormKind};

use super::{r0, r2, t0, term, CheckResult, Evaluator, ParamValue, Params};

/// PSD tolerance for the Schur multiplier.
const SCHUR_PSD_TOL: f64 = 1e-10;
/// Relative slack when testing that `[m, M]` contains both spectra.
const SPECTRUM_BOUNDS_SLACK: f64 = 1e-12;

/// Which display of the summed refinement to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorollaryBranch {
    /// `ν ≥ 0`.
    Nonneg,
    /// `ν ≤ −1`.
    LeMinusOne,
}

impl CorollaryBranch {
    pub fn name(self) -> &'static str {
        match self {
            CorollaryBranch::Nonneg => "nonneg",
            CorollaryBranch::LeMinusOne => "le_minus_one",
        }
    }
}

fn params<const N: usize>(items: [(&'static str, ParamValue); N]) -> Params {
    items.into_iter().collect()
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(range_error(msg()))
    }
}

fn require_mid_nu(check: &str, nu: f64) -> Result<()> {
    require((0.25..=0.75).contains(&nu), || {
        format!("{check}: nu must lie in [1/4, 3/4], got {nu}")
    })
}

fn require_alpha_half(check: &str, alpha: f64) -> Result<()> {
    require(alpha >= 0.5 && alpha.is_finite(), || {
        format!("{check}: alpha must be >= 1/2, got {alpha}")
    })
}

/// Jensen gap of `F` on `(1/4, 1/2)`: `(F(1/4) + F(1/2))/2 − F(3/8)`.
fn f_gap(ev: &Evaluator, k: NormKind) -> Result<f64> {
    Ok(0.5 * (ev.f(k, 0.25)? + ev.f(k, 0.5)?) - ev.f(k, 0.375)?)
}

impl Evaluator<'_> {
    /// `F(ν) ≤ (4r₀−1)F(1/2) + 2(1−2r₀)G(α) ≤ G(α)`.
    pub fn check_t1(&self, k: NormKind, nu: f64, alpha: f64) -> Result<CheckResult> {
        require_mid_nu("check_t1", nu)?;
        require_alpha_half("check_t1", alpha)?;
        let r = r0(nu);
        let g = self.g(k, alpha)?;
        let chain = vec![
            term("F(nu)", self.f(k, nu)?),
            term(
                "(4r0-1)F(1/2)+2(1-2r0)G(alpha)",
                (4.0 * r - 1.0) * self.f(k, 0.5)? + 2.0 * (1.0 - 2.0 * r) * g,
            ),
            term("G(alpha)", g),
        ];
        Ok(CheckResult::new(
            "check_t1",
            chain,
            params([
                ("nu", nu.into()),
                ("alpha", alpha.into()),
                ("norm", k.into()),
            ]),
        ))
    }

    /// `F(1/2) + 2(2∫F − F(1/2)) ≤ G(α)`, `∫` over `[1/4, 3/4]`.
    pub fn check_t1_integral(&self, k: NormKind, alpha: f64) -> Result<CheckResult> {
        require_alpha_half("check_t1_integral", alpha)?;
        let half = self.f(k, 0.5)?;
        let lhs = half + 2.0 * (2.0 * self.integral_f(k)? - half);
        let chain = vec![
            term("F(1/2)+2(2intF-F(1/2))", lhs),
            term("G(alpha)", self.g(k, alpha)?),
        ];
        Ok(CheckResult::new(
            "check_t1_integral",
            chain,
            params([("alpha", alpha.into()), ("norm", k.into())]),
        ))
    }

    /// `(4r₀−1)F(1/2) + 2(1−2r₀)G(α) ≤ 2r₂F(1/2) + (1−2r₂)G(α)`.
    pub fn check_t20(&self, k: NormKind, nu: f64, alpha: f64) -> Result<CheckResult> {
        require_mid_nu("check_t20", nu)?;
        require_alpha_half("check_t20", alpha)?;
        let (a, b) = (r0(nu), r2(nu));
        let (half, g) = (self.f(k, 0.5)?, self.g(k, alpha)?);
        let chain = vec![
            term(
                "(4r0-1)F(1/2)+2(1-2r0)G(alpha)",
                (4.0 * a - 1.0) * half + 2.0 * (1.0 - 2.0 * a) * g,
            ),
            term(
                "2r2F(1/2)+(1-2r2)G(alpha)",
                2.0 * b * half + (1.0 - 2.0 * b) * g,
            ),
        ];
        Ok(CheckResult::new(
            "check_t20",
            chain,
            params([
                ("nu", nu.into()),
                ("alpha", alpha.into()),
                ("norm", k.into()),
            ]),
        ))
    }

    /// Hilbert–Schmidt bound with the Kantorovich-type factor
    /// `((m+M)/(2√(mM)))^{1−ν}`; `m ≤ λ(A), λ(B) ≤ M` is enforced.
    pub fn check_kantorovich_s2(&self, nu: f64, m: f64, big_m: f64) -> Result<CheckResult> {
        require((0.0..=1.0).contains(&nu), || {
            format!("check_kantorovich_s2: nu must lie in [0, 1], got {nu}")
        })?;
        require(m > 0.0 && m <= big_m && big_m.is_finite(), || {
            format!("check_kantorovich_s2: need 0 < m <= M, got m = {m}, M = {big_m}")
        })?;
        let t = self.triple();
        let lowest = t.eig_a().min().min(t.eig_b().min());
        let highest = t.eig_a().max().max(t.eig_b().max());
        if lowest < m * (1.0 - SPECTRUM_BOUNDS_SLACK)
            || highest > big_m * (1.0 + SPECTRUM_BOUNDS_SLACK)
        {
            return Err(Error::SpectrumBounds {
                m,
                big_m,
                lowest,
                highest,
            });
        }
        let k = NormKind::Schatten(2.0);
        let factor = kantorovich_factor(m, big_m)?.powf(1.0 - nu);
        let chain = vec![
            term("F(nu)", self.f(k, nu)?),
            term("factor^(1-nu)G(nu)", factor * self.g(k, nu)?),
        ];
        Ok(CheckResult::new(
            "check_kantorovich_s2",
            chain,
            params([
                ("nu", nu.into()),
                ("m", m.into()),
                ("M", big_m.into()),
                ("norm", k.into()),
            ]),
        ))
    }

    /// `K(ν) ≤ 2(1−2r₀)K(1/4)`.
    pub fn check_t2(&self, k: NormKind, nu: f64) -> Result<CheckResult> {
        require_mid_nu("check_t2", nu)?;
        let chain = vec![
            term("K(nu)", self.k(k, nu)?),
            term(
                "2(1-2r0)K(1/4)",
                2.0 * (1.0 - 2.0 * r0(nu)) * self.k(k, 0.25)?,
            ),
        ];
        Ok(CheckResult::new(
            "check_t2",
            chain,
            params([("nu", nu.into()), ("norm", k.into())]),
        ))
    }

    /// `∫K ≤ ¼K(1/4) ≤ ⅛K(1)`, `∫` over `[1/4, 3/4]`.
    pub fn check_t2_integral(&self, k: NormKind) -> Result<CheckResult> {
        let chain = vec![
            term("intK", self.integral_k(k)?),
            term("K(1/4)/4", 0.25 * self.k(k, 0.25)?),
            term("K(1)/8", 0.125 * self.k(k, 1.0)?),
        ];
        Ok(CheckResult::new(
            "check_t2_integral",
            chain,
            params([("norm", k.into())]),
        ))
    }

    /// `K(ν) ≤ |2ν−1|·|||AX − XB|||` on `[0, 1]`.
    pub fn check_heinz_diff_classical(&self, k: NormKind, nu: f64) -> Result<CheckResult> {
        require((0.0..=1.0).contains(&nu), || {
            format!("check_heinz_diff_classical: nu must lie in [0, 1], got {nu}")
        })?;
        let (lhs, rhs) = self.gen_diff_sides(k, 1.0, nu)?;
        let chain = vec![term("K(nu)", lhs), term("|2nu-1| |||AX-XB|||", rhs)];
        Ok(CheckResult::new(
            "check_heinz_diff_classical",
            chain,
            params([("nu", nu.into()), ("norm", k.into())]),
        ))
    }

    /// `αK(ν) ≤ |2ν−1|·max(‖A^{1−α}‖, ‖B^{1−α}‖)·|||A^αX − XB^α|||`.
    pub fn check_gen_diff(&self, k: NormKind, alpha: f64, nu: f64) -> Result<CheckResult> {
        require(alpha >= 1.0 && alpha.is_finite(), || {
            format!("check_gen_diff: alpha must be >= 1, got {alpha}")
        })?;
        let (lo, hi) = ((1.0 - alpha) / 2.0, (1.0 + alpha) / 2.0);
        require((lo..=hi).contains(&nu), || {
            format!("check_gen_diff: nu must lie in [{lo}, {hi}], got {nu}")
        })?;
        let (lhs, rhs) = self.gen_diff_sides(k, alpha, nu)?;
        let chain = vec![
            term("alpha K(nu)", lhs),
            term("|2nu-1| max||A^(1-alpha)|| |||A^aX-XB^a|||", rhs),
        ];
        Ok(CheckResult::new(
            "check_gen_diff",
            chain,
            params([
                ("nu", nu.into()),
                ("alpha", alpha.into()),
                ("norm", k.into()),
            ]),
        ))
    }

    fn gen_diff_sides(&self, k: NormKind, alpha: f64, nu: f64) -> Result<(f64, f64)> {
        let lhs = alpha * self.k(k, nu)?;
        let factor = if alpha == 1.0 {
            1.0
        } else {
            self.max_power_norm(1.0 - alpha)
        };
        let rhs = (2.0 * nu - 1.0).abs() * factor * self.commutator(k, alpha)?;
        Ok((lhs, rhs))
    }

    /// `|||A^rX − XB^r||| ≤ r·max(‖A^{r−1}‖, ‖B^{r−1}‖)·|||AX − XB|||`,
    /// evaluated on the dilation `A ⊕ B` with `X` in the corner.
    pub fn check_power_diff(&self, k: NormKind, r: f64) -> Result<CheckResult> {
        require(r > 0.0 && r <= 1.0, || {
            format!("check_power_diff: r must lie in (0, 1], got {r}")
        })?;
        let lhs = self.dilated_commutator(k, r)?;
        let factor = if r == 1.0 {
            1.0
        } else {
            r * self.max_power_norm(r - 1.0)
        };
        let rhs = factor * self.dilated_commutator(k, 1.0)?;
        let chain = vec![
            term("|||A^rX-XB^r|||", lhs),
            term("r max||C^(r-1)|| |||AX-XB|||", rhs),
        ];
        Ok(CheckResult::new(
            "check_power_diff",
            chain,
            params([("r", r.into()), ("norm", k.into())]),
        ))
    }

    /// `|2ν−1|·|||AX − XB||| ≤ K(ν)` for `ν ∉ [0, 1]`.
    pub fn check_reverse_heinz(&self, k: NormKind, nu: f64) -> Result<CheckResult> {
        require(nu.is_finite() && !(0.0..=1.0).contains(&nu), || {
            format!("check_reverse_heinz: nu must lie outside [0, 1], got {nu}")
        })?;
        let chain = vec![
            term(
                "|2nu-1| |||AX-XB|||",
                (2.0 * nu - 1.0).abs() * self.commutator(k, 1.0)?,
            ),
            term("K(nu)", self.k(k, nu)?),
        ];
        Ok(CheckResult::new(
            "check_reverse_heinz",
            chain,
            params([("nu", nu.into()), ("norm", k.into())]),
        ))
    }

    /// Midpoint convexity of `K` over every `(gᵢ, gᵢ₊₂)` of a sorted grid;
    /// the chain reports the pair with the smallest margin relative to its
    /// tolerance.
    pub fn check_convexity_extension(&self, k: NormKind, grid: &[f64]) -> Result<CheckResult> {
        require(grid.len() >= 3, || {
            "check_convexity_extension: grid needs at least 3 points".into()
        })?;
        require(
            grid.iter().all(|x| x.is_finite()) && grid.windows(2).all(|w| w[0] < w[1]),
            || "check_convexity_extension: grid must be finite and strictly increasing".into(),
        )?;
        let values = grid
            .iter()
            .map(|&x| self.k(k, x))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: Option<CheckResult> = None;
        for i in 0..grid.len() - 2 {
            let (a, b) = (grid[i], grid[i + 2]);
            let mid = 0.5 * (a + b);
            let chain = vec![
                term("K((a+b)/2)", self.k(k, mid)?),
                term("(K(a)+K(b))/2", 0.5 * (values[i] + values[i + 2])),
            ];
            let r = CheckResult::new(
                "check_convexity_extension",
                chain,
                params([("a", a.into()), ("b", b.into())]),
            );
            if worst
                .as_ref()
                .is_none_or(|w| r.relative_margin() < w.relative_margin())
            {
                worst = Some(r);
            }
        }
        let worst = worst.expect("grid has at least one pair");
        Ok(worst
            .with_param("norm", k)
            .with_param("grid_min", grid[0])
            .with_param("grid_max", grid[grid.len() - 1])
            .with_param("pairs", grid.len() - 2))
    }

    /// Telescoped tangent-line refinement of `K(−ν)` from below.
    pub fn check_corollary_sum(
        &self,
        k: NormKind,
        nu: f64,
        n: usize,
        branch: CorollaryBranch,
    ) -> Result<CheckResult> {
        require(n >= 1, || "check_corollary_sum: N must be >= 1".into())?;
        match branch {
            CorollaryBranch::Nonneg => require(nu >= 0.0 && nu.is_finite(), || {
                format!("check_corollary_sum: branch nonneg needs nu >= 0, got {nu}")
            })?,
            CorollaryBranch::LeMinusOne => require(nu <= -1.0 && nu.is_finite(), || {
                format!("check_corollary_sum: branch le_minus_one needs nu <= -1, got {nu}")
            })?,
        }
        let mut lhs = self.k(k, 0.0)?;
        for j in 1..=n {
            let step = 0.5f64.powi(j as i32);
            let weight = 2f64.powi(j as i32);
            match branch {
                CorollaryBranch::Nonneg => {
                    let gap = 0.5 * (self.k(k, 0.0)? + self.k(k, 2.0 * step)?) - self.k(k, step)?;
                    lhs += weight * nu * gap;
                }
                CorollaryBranch::LeMinusOne => {
                    let gap = 0.5 * (self.k(k, 1.0)? + self.k(k, 1.0 - 2.0 * step)?)
                        - self.k(k, 1.0 - step)?;
                    lhs -= weight * (1.0 + nu) * gap;
                }
            }
        }
        let chain = vec![term("refined sum", lhs), term("K(-nu)", self.k(k, -nu)?)];
        Ok(CheckResult::new(
            "check_corollary_sum",
            chain,
            params([
                ("nu", nu.into()),
                ("N", n.into()),
                ("branch", branch.name().into()),
                ("norm", k.into()),
            ]),
        ))
    }

    /// `F(ν) ≤ F(ν) + 2λ_min·gap ≤ (4r₀−1)F(1/2) + 2(1−2r₀)G(α) ≤ G(α)`
    /// with `λ_min = min{2−4r₀, 4r₀−1}`.
    pub fn check_conde(&self, k: NormKind, nu: f64, alpha: f64) -> Result<CheckResult> {
        require_mid_nu("check_conde", nu)?;
        require_alpha_half("check_conde", alpha)?;
        let r = r0(nu);
        let lambda_min = (2.0 - 4.0 * r).min(4.0 * r - 1.0);
        let f = self.f(k, nu)?;
        let g = self.g(k, alpha)?;
        let chain = vec![
            term("F(nu)", f),
            term("F(nu)+2lmin gap", f + 2.0 * lambda_min * f_gap(self, k)?),
            term(
                "(4r0-1)F(1/2)+2(1-2r0)G(alpha)",
                (4.0 * r - 1.0) * self.f(k, 0.5)? + 2.0 * (1.0 - 2.0 * r) * g,
            ),
            term("G(alpha)", g),
        ];
        Ok(CheckResult::new(
            "check_conde",
            chain,
            params([
                ("nu", nu.into()),
                ("alpha", alpha.into()),
                ("norm", k.into()),
            ]),
        ))
    }

    /// `F(1/2) + gap + 2(2∫F − F(1/2)) ≤ G(α)`.
    pub fn check_integral_refinement(&self, k: NormKind, alpha: f64) -> Result<CheckResult> {
        require_alpha_half("check_integral_refinement", alpha)?;
        let half = self.f(k, 0.5)?;
        let lhs = half + f_gap(self, k)? + 2.0 * (2.0 * self.integral_f(k)? - half);
        let chain = vec![
            term("F(1/2)+gap+2(2intF-F(1/2))", lhs),
            term("G(alpha)", self.g(k, alpha)?),
        ];
        Ok(CheckResult::new(
            "check_integral_refinement",
            chain,
            params([("alpha", alpha.into()), ("norm", k.into())]),
        ))
    }

    /// `K(ν) + 2λ_min(½K(1/4) − K(3/8)) ≤ 2(1−2r₀)K(1/4)`.
    pub fn check_t3(&self, k: NormKind, nu: f64) -> Result<CheckResult> {
        require_mid_nu("check_t3", nu)?;
        let r = r0(nu);
        let lambda_min = (2.0 - 4.0 * r).min(4.0 * r - 1.0);
        let quarter = self.k(k, 0.25)?;
        let chain = vec![
            term(
                "K(nu)+2lmin(K(1/4)/2-K(3/8))",
                self.k(k, nu)? + 2.0 * lambda_min * (0.5 * quarter - self.k(k, 0.375)?),
            ),
            term("2(1-2r0)K(1/4)", 2.0 * (1.0 - 2.0 * r) * quarter),
        ];
        Ok(CheckResult::new(
            "check_t3",
            chain,
            params([("nu", nu.into()), ("norm", k.into())]),
        ))
    }

    /// `∫K ≤ ⅛K(1/4) + ¼K(3/8) ≤ ¼K(1/4)`.
    pub fn check_t4(&self, k: NormKind) -> Result<CheckResult> {
        let quarter = self.k(k, 0.25)?;
        let chain = vec![
            term("intK", self.integral_k(k)?),
            term(
                "K(1/4)/8+K(3/8)/4",
                0.125 * quarter + 0.25 * self.k(k, 0.375)?,
            ),
            term("K(1/4)/4", 0.25 * quarter),
        ];
        Ok(CheckResult::new(
            "check_t4",
            chain,
            params([("norm", k.into())]),
        ))
    }

    /// `||| |A^{1/2}XB^{1/2}|^r |||² ≤ φ(s) ≤ ||| |AX|^r |||·||| |XB|^r |||`.
    pub fn check_hiai_zhan(&self, k: NormKind, s: f64, r: f64) -> Result<CheckResult> {
        require((0.0..=1.0).contains(&s), || {
            format!("check_hiai_zhan: s must lie in [0, 1], got {s}")
        })?;
        let mid = self.sandwich_power(k, 0.5, r)?;
        let chain = vec![
            term("||| |A^(1/2)XB^(1/2)|^r |||^2", mid * mid),
            term("phi(s)", self.phi(k, s, r)?),
            term(
                "||| |AX|^r ||| ||| |XB|^r |||",
                self.sandwich_power(k, 1.0, r)? * self.sandwich_power(k, 0.0, r)?,
            ),
        ];
        Ok(CheckResult::new(
            "check_hiai_zhan",
            chain,
            params([("s", s.into()), ("r", r.into()), ("norm", k.into())]),
        ))
    }

    /// `φ(s) ≤ φ(s) + λ_min((φ(1/2)+φ(0))/2 − φ(1/4)) ≤ (1−2t₀)φ(0) + 2t₀φ(1/2)`
    /// with `λ_min = min{1−2t₀, 2t₀}`.
    pub fn check_cs_refinement(&self, k: NormKind, s: f64, r: f64) -> Result<CheckResult> {
        require((0.0..=1.0).contains(&s), || {
            format!("check_cs_refinement: s must lie in [0, 1], got {s}")
        })?;
        let t = t0(s);
        let lambda_min = (1.0 - 2.0 * t).min(2.0 * t);
        let phi_s = self.phi(k, s, r)?;
        let (phi_0, phi_half) = (self.phi(k, 0.0, r)?, self.phi(k, 0.5, r)?);
        let gap = 0.5 * (phi_half + phi_0) - self.phi(k, 0.25, r)?;
        let chain = vec![
            term("phi(s)", phi_s),
            term("phi(s)+lmin gap", phi_s + lambda_min * gap),
            term(
                "(1-2t0)phi(0)+2t0 phi(1/2)",
                (1.0 - 2.0 * t) * phi_0 + 2.0 * t * phi_half,
            ),
        ];
        Ok(CheckResult::new(
            "check_cs_refinement",
            chain,
            params([("s", s.into()), ("r", r.into()), ("norm", k.into())]),
        ))
    }
}

/// `|||Y∘Z||| ≤ max_i yᵢᵢ·|||Z|||` for positive semidefinite `Y`.
pub fn check_schur_norm_bound(y: &Matrix, z: &Matrix, k: NormKind) -> Result<CheckResult> {
    if !is_psd(y, SCHUR_PSD_TOL)? {
        let min = crate::linalg::sym_eig(y)?.min();
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let product = y.schur(z)?;
    let max_diag = y.diagonal().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let chain = vec![
        term("|||Y o Z|||", ui_norm(&product, k)?),
        term("max y_ii |||Z|||", max_diag * ui_norm(z, k)?),
    ];
    Ok(CheckResult::new(
        "check_schur_norm_bound",
        chain,
        params([("dim", y.rows().into()), ("norm", k.into())]),
    ))
}

macro_rules! triple_checks {
    ($($(#[$doc:meta])* $name:ident($($arg:ident: $ty:ty),*);)*) => {$(
        $(#[$doc])*
        pub fn $name(t: &MeanTriple, $($arg: $ty),*) -> Result<CheckResult> {
            Evaluator::new(t).$name($($arg),*)
        }
    )*};
}

triple_checks! {
    /// See [`Evaluator::check_t1`].
    check_t1(k: NormKind, nu: f64, alpha: f64);
    /// See [`Evaluator::check_t1_integral`].
    check_t1_integral(k: NormKind, alpha: f64);
    /// See [`Evaluator::check_t20`].
    check_t20(k: NormKind, nu: f64, alpha: f64);
    /// See [`Evaluator::check_kantorovich_s2`].
    check_kantorovich_s2(nu: f64, m: f64, big_m: f64);
    /// See [`Evaluator::check_t2`].
    check_t2(k: NormKind, nu: f64);
    /// See [`Evaluator::check_t2_integral`].
    check_t2_integral(k: NormKind);
    /// See [`Evaluator::check_heinz_diff_classical`].
    check_heinz_diff_classical(k: NormKind, nu: f64);
    /// See [`Evaluator::check_gen_diff`].
    check_gen_diff(k: NormKind, alpha: f64, nu: f64);
    /// See [`Evaluator::check_power_diff`].
    check_power_diff(k: NormKind, r: f64);
    /// See [`Evaluator::check_reverse_heinz`].
    check_reverse_heinz(k: NormKind, nu: f64);
    /// See [`Evaluator::check_convexity_extension`].
    check_convexity_extension(k: NormKind, grid: &[f64]);
    /// See [`Evaluator::check_corollary_sum`].
    check_corollary_sum(k: NormKind, nu: f64, n: usize, branch: CorollaryBranch);
    /// See [`Evaluator::check_conde`].
    check_conde(k: NormKind, nu: f64, alpha: f64);
    /// See [`Evaluator::check_integral_refinement`].
    check_integral_refinement(k: NormKind, alpha: f64);
    /// See [`Evaluator::check_t3`].
    check_t3(k: NormKind, nu: f64);
    /// See [`Evaluator::check_t4`].
    check_t4(k: NormKind);
    /// See [`Evaluator::check_hiai_zhan`].
    check_hiai_zhan(k: NormKind, s: f64, r: f64);
    /// See [`Evaluator::check_cs_refinement`].
    check_cs_refinement(k: NormKind, s: f64, r: f64);
}
