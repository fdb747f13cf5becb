//! Seeded verification suites and their reports.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functional::Functional;
use super::search::counterexample_search;
use super::{
    check_affine_jensen, check_joint_convexity_loewner, check_joint_convexity_scalar,
    check_subhom_jensen, derive_affine_via_shift, require_nonpositive_at_zero,
};
use crate::error::{Error, Result};
use crate::funcat::ScalarFunction;
use crate::io::{to_canonical_json, MatrixFile, MatrixKind};
use crate::linalg::{
    complex_gaussian, sample_density, sample_hermitian, sample_isometric_pair, sample_positive,
    sample_subisometric_pair, trial_rng, ComplexMatrix, HermitianMatrix, InequalityReport,
    PositiveMatrix, SeededRng, ToleranceConfig,
};

/// Matrix stored in a witness under its role name (`t1`, `a`, `k`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: MatrixFile,
}

/// Concrete inputs for which a checked inequality failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub suite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<String>,
    pub trial: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    pub margin: f64,
    pub scale: f64,
    pub matrices: Vec<NamedMatrix>,
}

impl Witness {
    pub fn matrix(&self, name: &str) -> Result<&ComplexMatrix> {
        self.matrices
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.matrix.entries)
            .ok_or_else(|| Error::Parse(format!("witness has no matrix `{name}`")))
    }

    fn hermitian(&self, name: &str) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.matrix(name)?.clone())
    }

    fn positive(&self, name: &str, cfg: &ToleranceConfig) -> Result<PositiveMatrix> {
        PositiveMatrix::new(self.hermitian(name)?, cfg.dom_floor, name)
    }

    fn function(&self) -> Result<ScalarFunction> {
        let id = self.function.as_deref().ok_or_else(|| Error::Parse("witness has no function".into()))?;
        ScalarFunction::parse(id)
    }

    fn h_function(&self) -> Result<Option<ScalarFunction>> {
        self.h_function.as_deref().map(ScalarFunction::parse).transpose()
    }

    pub fn to_canonical_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn named(name: &str, m: &ComplexMatrix, kind: MatrixKind) -> NamedMatrix {
    NamedMatrix {
        name: name.to_string(),
        matrix: MatrixFile::new(m.clone(), Some(kind)),
    }
}

/// Re-evaluates the inequality stored in a witness.
pub fn recheck(w: &Witness, cfg: &ToleranceConfig) -> Result<InequalityReport> {
    match w.suite.as_str() {
        "affine_jensen" | "counterexample" => check_affine_jensen(
            &w.function()?,
            &w.hermitian("t1")?,
            &w.hermitian("t2")?,
            w.matrix("a")?,
            w.matrix("b")?,
            cfg,
        ),
        "subhom_jensen" => check_subhom_jensen(
            &w.function()?,
            &w.hermitian("t1")?,
            &w.hermitian("t2")?,
            w.matrix("a")?,
            w.matrix("b")?,
            cfg,
        ),
        "shift_route" => {
            let c = w.shift.ok_or_else(|| Error::Parse("shift_route witness has no shift".into()))?;
            shift_gap(&w.function()?, c, &w.hermitian("t1")?, &w.hermitian("t2")?, w.matrix("a")?, w.matrix("b")?, cfg)
        }
        "joint_convexity" => {
            let id = w.functional.as_deref().ok_or_else(|| Error::Parse("witness has no functional".into()))?;
            let f = w.function.as_deref().map(ScalarFunction::parse).transpose()?;
            let h = w.h_function()?;
            let functional = Functional::parse(id, f.as_ref(), h.as_ref(), None, None, None)?;
            let c = w.c.ok_or_else(|| Error::Parse("witness has no mixing weight".into()))?;
            check_joint_convexity_scalar(
                &functional,
                (&w.positive("a1", cfg)?, &w.positive("b1", cfg)?),
                (&w.positive("a2", cfg)?, &w.positive("b2", cfg)?),
                w.matrix("k")?,
                c,
                cfg,
            )
        }
        "loewner_convexity" => {
            let c = w.c.ok_or_else(|| Error::Parse("witness has no mixing weight".into()))?;
            check_joint_convexity_loewner(
                &w.function()?,
                w.h_function()?.as_ref(),
                (&w.positive("a1", cfg)?, &w.positive("b1", cfg)?),
                (&w.positive("a2", cfg)?, &w.positive("b2", cfg)?),
                c,
                cfg,
            )
        }
        other => Err(Error::Parse(format!("unknown witness suite `{other}`"))),
    }
}

/// `|margin(shift route) − margin(direct)|` reported as a negative margin.
pub(crate) fn shift_gap(
    f: &ScalarFunction,
    c: f64,
    t1: &HermitianMatrix,
    t2: &HermitianMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<InequalityReport> {
    let direct = check_affine_jensen(f, t1, t2, a, b, cfg)?;
    let shifted = derive_affine_via_shift(f, c, t1, t2, a, b, cfg)?;
    let gap = (direct.margin - shifted.margin).abs();
    Ok(InequalityReport::new("shift_route", -gap, direct.scale.max(shifted.scale), cfg.psd_tol))
}

/// Registered suite.
#[derive(Debug, Clone, PartialEq)]
pub enum SuiteKind {
    AffineJensen,
    SubhomJensen,
    ShiftRoute,
    JointConvexity(Functional),
    LoewnerConvexity,
    Counterexample,
}

/// Fully resolved suite configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSpec {
    pub kind: SuiteKind,
    pub f: Option<ScalarFunction>,
    pub h: Option<ScalarFunction>,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SuiteSpec {
    /// Resolves a suite identifier: `affine_jensen`, `subhom_jensen`,
    /// `shift_route`, `joint_convexity:<functional>`,
    /// `loewner_convexity[:<fn>]` or `counterexample[:<fn>]`.
    #[allow(clippy::too_many_arguments)]
    pub fn parse(
        id: &str,
        f: Option<ScalarFunction>,
        h: Option<ScalarFunction>,
        s: Option<f64>,
        p: Option<f64>,
        q: Option<f64>,
        n: usize,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let (name, rest) = match id.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (id, None),
        };
        let fn_from = |rest: Option<&str>, f: Option<ScalarFunction>| -> Result<ScalarFunction> {
            match rest {
                Some(fid) => ScalarFunction::parse(fid),
                None => f.ok_or_else(|| Error::Config(format!("suite `{name}` requires a function (--fn)"))),
            }
        };
        let (kind, f, h) = match name {
            "affine_jensen" | "subhom_jensen" | "shift_route" => {
                let f = fn_from(rest, f)?;
                let kind = match name {
                    "affine_jensen" => SuiteKind::AffineJensen,
                    "subhom_jensen" => SuiteKind::SubhomJensen,
                    _ => SuiteKind::ShiftRoute,
                };
                (kind, Some(f), None)
            }
            "joint_convexity" => {
                let fid = rest.ok_or_else(|| Error::Config("joint_convexity requires a functional id".into()))?;
                let functional = Functional::parse(fid, f.as_ref(), h.as_ref(), s, p, q)?;
                let (f, h) = match &functional {
                    Functional::Perspective(f) => (Some(f.clone()), None),
                    Functional::Marechal(f, h) => (Some(f.clone()), Some(h.clone())),
                    _ => (None, None),
                };
                (SuiteKind::JointConvexity(functional), f, h)
            }
            "loewner_convexity" => (SuiteKind::LoewnerConvexity, Some(fn_from(rest, f)?), h),
            "counterexample" => (SuiteKind::Counterexample, Some(fn_from(rest, f)?), None),
            other => return Err(Error::Config(format!("unknown suite `{other}`"))),
        };
        let spec = SuiteSpec { kind, f, h, n, trials, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("dimension n must be at least 1".into()));
        }
        let need_f = || self.f.as_ref().ok_or_else(|| Error::Config("suite requires a function".into()));
        match &self.kind {
            SuiteKind::AffineJensen | SuiteKind::LoewnerConvexity => {
                need_f()?;
            }
            SuiteKind::SubhomJensen => {
                require_nonpositive_at_zero(need_f()?).map_err(|e| Error::Config(e.to_string()))?;
            }
            SuiteKind::ShiftRoute => {
                let f = need_f()?;
                if !f.domain().contains_interior(0.5) {
                    return Err(Error::Config(format!("{f}: shift points in (0,1) are outside the domain")));
                }
            }
            SuiteKind::JointConvexity(functional) => {
                functional.sense()?;
            }
            SuiteKind::Counterexample => {
                need_f()?;
                if self.n < 2 {
                    return Err(Error::Config("counterexample search needs n >= 2".into()));
                }
            }
        }
        Ok(())
    }

    pub fn id(&self) -> String {
        match &self.kind {
            SuiteKind::AffineJensen => "affine_jensen".into(),
            SuiteKind::SubhomJensen => "subhom_jensen".into(),
            SuiteKind::ShiftRoute => "shift_route".into(),
            SuiteKind::JointConvexity(func) => format!("joint_convexity:{}", func.id()),
            SuiteKind::LoewnerConvexity => "loewner_convexity".into(),
            SuiteKind::Counterexample => "counterexample".into(),
        }
    }

    fn function(&self) -> &ScalarFunction {
        self.f.as_ref().expect("validated")
    }
}

/// Aggregate of a seeded suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_function: Option<String>,
    pub n: usize,
    pub trials: u64,
    pub trials_run: u64,
    pub seed: u64,
    pub tolerance: ToleranceConfig,
    /// Minimum raw margin over trials.
    pub worst_margin: f64,
    /// Minimum of `margin / scale` over trials.
    pub worst_relative_margin: f64,
    pub worst_trial: u64,
    pub passed: bool,
    pub violations: Vec<Witness>,
    /// Wall time; not serialized, so reports stay byte-identical.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn to_canonical_json(&self) -> String {
        to_canonical_json(self)
    }
}

/// Mixing weight for trial `t`: 0, ½ and 1 on the first three trials, then
/// uniform on `[0, 1]`.
pub(crate) fn mixing_weight(trial: u64, rng: &mut SeededRng) -> f64 {
    match trial {
        0 => 0.0,
        1 => 0.5,
        2 => 1.0,
        _ => rng.random::<f64>(),
    }
}

/// Random Hermitian matrix with spectrum inside the domain of `f`.
pub(crate) fn sample_in_domain(f: &ScalarFunction, n: usize, rng: &mut SeededRng) -> HermitianMatrix {
    let d = f.domain();
    if d.bounded_below() {
        sample_positive(n, rng).hermitian().shift(d.lo)
    } else {
        sample_hermitian(n, 1.0, rng)
    }
}

type TrialResult = Result<(InequalityReport, Option<Witness>)>;

fn jensen_witness(
    spec: &SuiteSpec,
    trial: u64,
    rep: &InequalityReport,
    mats: [(&str, &ComplexMatrix, MatrixKind); 4],
    shift: Option<f64>,
) -> Witness {
    Witness {
        suite: spec.id(),
        function: spec.f.as_ref().map(|f| f.id()),
        h_function: None,
        functional: None,
        trial,
        c: None,
        shift,
        margin: rep.margin,
        scale: rep.scale,
        matrices: mats.iter().map(|(n, m, k)| named(n, m, *k)).collect(),
    }
}

fn run_trial(spec: &SuiteSpec, trial: u64, cfg: &ToleranceConfig) -> TrialResult {
    let mut rng = trial_rng(spec.seed, trial);
    let n = spec.n;
    match &spec.kind {
        SuiteKind::AffineJensen | SuiteKind::SubhomJensen | SuiteKind::ShiftRoute => {
            let f = spec.function();
            let t1 = sample_in_domain(f, n, &mut rng);
            let t2 = sample_in_domain(f, n, &mut rng);
            let (a, b) = if spec.kind == SuiteKind::SubhomJensen {
                sample_subisometric_pair(n, &mut rng)
            } else {
                sample_isometric_pair(n, &mut rng)
            };
            let (rep, shift) = match spec.kind {
                SuiteKind::AffineJensen => (check_affine_jensen(f, &t1, &t2, &a, &b, cfg)?, None),
                SuiteKind::SubhomJensen => (check_subhom_jensen(f, &t1, &t2, &a, &b, cfg)?, None),
                _ => {
                    let mut c = rng.random::<f64>();
                    if c == 0.0 {
                        c = 0.5;
                    }
                    (shift_gap(f, c, &t1, &t2, &a, &b, cfg)?, Some(c))
                }
            };
            let witness = (!rep.holds).then(|| {
                let h = MatrixKind::Hermitian;
                let g = MatrixKind::General;
                jensen_witness(spec, trial, &rep, [("t1", t1.as_matrix(), h), ("t2", t2.as_matrix(), h), ("a", &a, g), ("b", &b, g)], shift)
            });
            Ok((rep, witness))
        }
        SuiteKind::JointConvexity(functional) => {
            let c = mixing_weight(trial, &mut rng);
            let (draw, kind): (fn(usize, &mut SeededRng) -> PositiveMatrix, _) = if functional.wants_density() {
                (sample_density, MatrixKind::Density)
            } else {
                (sample_positive, MatrixKind::Positive)
            };
            let (a1, b1, a2, b2) = (draw(n, &mut rng), draw(n, &mut rng), draw(n, &mut rng), draw(n, &mut rng));
            let k = if functional.wants_density() {
                ComplexMatrix::identity(n, n)
            } else {
                complex_gaussian(n, n, &mut rng)
            };
            let rep = check_joint_convexity_scalar(functional, (&a1, &b1), (&a2, &b2), &k, c, cfg)?;
            let witness = (!rep.holds).then(|| Witness {
                suite: "joint_convexity".into(),
                function: spec.f.as_ref().map(|f| f.id()),
                h_function: spec.h.as_ref().map(|h| h.id()),
                functional: Some(functional.id()),
                trial,
                c: Some(c),
                shift: None,
                margin: rep.margin,
                scale: rep.scale,
                matrices: vec![
                    named("a1", a1.as_matrix(), kind),
                    named("b1", b1.as_matrix(), kind),
                    named("a2", a2.as_matrix(), kind),
                    named("b2", b2.as_matrix(), kind),
                    named("k", &k, MatrixKind::General),
                ],
            });
            Ok((rep, witness))
        }
        SuiteKind::LoewnerConvexity => {
            let c = mixing_weight(trial, &mut rng);
            let p: Vec<PositiveMatrix> = (0..4).map(|_| sample_density(n, &mut rng)).collect();
            let f = spec.function();
            let rep = check_joint_convexity_loewner(f, spec.h.as_ref(), (&p[0], &p[1]), (&p[2], &p[3]), c, cfg)?;
            let witness = (!rep.holds).then(|| Witness {
                suite: "loewner_convexity".into(),
                function: Some(f.id()),
                h_function: spec.h.as_ref().map(|h| h.id()),
                functional: None,
                trial,
                c: Some(c),
                shift: None,
                margin: rep.margin,
                scale: rep.scale,
                matrices: ["a1", "b1", "a2", "b2"]
                    .iter()
                    .zip(&p)
                    .map(|(name, m)| named(name, m.as_matrix(), MatrixKind::Density))
                    .collect(),
            });
            Ok((rep, witness))
        }
        SuiteKind::Counterexample => unreachable!("handled by counterexample_search"),
    }
}

/// Runs a suite. Trial `t` draws from stream `t` of the seed, trials run in
/// parallel, and aggregation is in trial order, so the report depends only
/// on the `SuiteSpec` and tolerances.
pub fn verify_suite(spec: &SuiteSpec, cfg: &ToleranceConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    spec.validate()?;
    let start = Instant::now();
    let mut report = VerificationReport {
        suite: spec.id(),
        function: spec.f.as_ref().map(|f| f.id()),
        h_function: spec.h.as_ref().map(|h| h.id()),
        n: spec.n,
        trials: spec.trials,
        trials_run: 0,
        seed: spec.seed,
        tolerance: *cfg,
        worst_margin: f64::INFINITY,
        worst_relative_margin: f64::INFINITY,
        worst_trial: 0,
        passed: true,
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };

    if spec.kind == SuiteKind::Counterexample {
        let outcome = counterexample_search(spec.function(), spec.n, spec.trials, spec.seed, cfg)?;
        report.trials_run = outcome.trials_run;
        report.worst_margin = outcome.worst_margin;
        report.worst_relative_margin = outcome.worst_relative_margin;
        report.worst_trial = outcome.worst_trial;
        report.violations.extend(outcome.witness);
    } else {
        let results: Vec<TrialResult> = (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, t, cfg))
            .collect();
        for (t, res) in results.into_iter().enumerate() {
            let (rep, witness) = res?;
            report.trials_run += 1;
            report.worst_margin = report.worst_margin.min(rep.margin);
            let rel = rep.relative_margin();
            if rel < report.worst_relative_margin {
                report.worst_relative_margin = rel;
                report.worst_trial = t as u64;
            }
            report.violations.extend(witness);
        }
    }
    report.passed = report.violations.is_empty();
    report.elapsed = start.elapsed();
    Ok(report)
}
