use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{json_bytes, Produced};
use crate::conservation::{random_conserving_case, verify_way, WayCase};
use crate::measurement::{check_uup, heisenberg_exhibit, random_case, RelationReport};
use crate::optimizer::{screen_case, violation_search, Exhibit, ModelFamily};
use crate::random::stream_rng;
use crate::{Error, Result};

/// Conserved total charges must be left undisturbed to this precision.
pub const TOTAL_DISTURBANCE_TOL: f64 = 1e-10;

/// Randomized suite settings; dimensions are drawn per model from the lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub count: usize,
    pub seed: u64,
    pub object_dims: Vec<usize>,
    pub apparatus_dims: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            count: 1000,
            seed: 0,
            object_dims: vec![2, 3],
            apparatus_dims: vec![2, 3, 4],
        }
    }
}

impl SuiteConfig {
    pub(crate) fn apply(&mut self, count: Option<usize>, seed: Option<u64>) {
        if let Some(c) = count {
            self.count = c;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Usage("count must be ≥ 1".into()));
        }
        let ok = |dims: &[usize]| !dims.is_empty() && dims.iter().all(|&d| (2..=16).contains(&d));
        if !ok(&self.object_dims) || !ok(&self.apparatus_dims) {
            return Err(Error::Usage(
                "dimension lists must be non-empty with entries in 2..=16".into(),
            ));
        }
        Ok(())
    }

    fn dims_for<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let od = self.object_dims[rng.random_range(0..self.object_dims.len())];
        let ad = self.apparatus_dims[rng.random_range(0..self.apparatus_dims.len())];
        (od, ad)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureDump {
    /// Trial index, or `None` for caller-supplied cases.
    pub trial: Option<u64>,
    pub report: RelationReport,
    pub case: serde_json::Value,
}

/// A supplied case turned away because a theorem precondition fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub index: usize,
    pub diagnostic: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub count: usize,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub rejected: usize,
    /// Smallest `lhs − rhs` over evaluated models.
    pub min_slack: Option<f64>,
    /// Largest disturbance of the conserved total (WAY suite only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_total_disturbance: Option<f64>,
    pub failures: Vec<FailureDump>,
    pub rejections: Vec<Rejection>,
}

impl SuiteReport {
    fn new(suite: &str, count: usize, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            count,
            seed,
            pass: 0,
            fail: 0,
            rejected: 0,
            min_slack: None,
            max_total_disturbance: None,
            failures: vec![],
            rejections: vec![],
        }
    }

    fn record(&mut self, ok: bool, slack: f64) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
        self.min_slack = Some(self.min_slack.map_or(slack, |m| m.min(slack)));
    }

    fn produced(&self, file: &str) -> Result<Produced> {
        Ok(Produced {
            summary: format!(
                "{}: pass={} fail={} rejected={} min_slack={}",
                self.suite,
                self.pass,
                self.fail,
                self.rejected,
                self.min_slack.map_or("n/a".into(), |s| format!("{s:e}"))
            ),
            violation: (self.fail > 0)
                .then(|| format!("{} of {} checks failed", self.fail, self.count)),
            files: vec![(file.into(), json_bytes(self)?)],
        })
    }
}

/// Universal relation over `count` Haar-random models.
pub fn uup_suite(config: &SuiteConfig) -> Result<Produced> {
    run_uup(config)?.produced("uup_suite.json")
}

pub fn run_uup(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let results: Vec<_> = (0..config.count as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(config.seed, trial);
            let (od, ad) = config.dims_for(&mut rng);
            let case = random_case(od, ad, &mut rng)?;
            let report = check_uup(&case.model, &case.a, &case.b, &case.psi)?;
            Ok((trial, case, report))
        })
        .collect::<Result<_>>()?;
    let mut out = SuiteReport::new("uup", config.count, config.seed);
    for (trial, case, report) in results {
        out.record(report.holds, report.slack);
        if !report.holds {
            out.failures.push(FailureDump {
                trial: Some(trial),
                report,
                case: serde_json::to_value(&case)?,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WaySuiteConfig {
    #[serde(flatten)]
    pub suite: SuiteConfig,
    /// Extra cases checked after the random ones; those failing a
    /// precondition are rejected, not counted as failures.
    pub extra_cases: Vec<WayCase>,
}

impl Default for WaySuiteConfig {
    fn default() -> Self {
        Self {
            suite: SuiteConfig {
                count: 500,
                ..SuiteConfig::default()
            },
            extra_cases: vec![],
        }
    }
}

/// Conservation-law noise bound over `count` conserving, Yanase-compatible models.
pub fn way_suite(config: &WaySuiteConfig) -> Result<Produced> {
    run_way(config)?.produced("way_suite.json")
}

pub fn run_way(config: &WaySuiteConfig) -> Result<SuiteReport> {
    let suite = &config.suite;
    suite.validate()?;
    let random: Vec<_> = (0..suite.count as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(suite.seed, trial);
            let (od, ad) = suite.dims_for(&mut rng);
            let case = random_conserving_case(od, ad, &mut rng)?;
            let out = verify_way(&case.model, &case.a, &case.charge, &case.psi);
            Ok((Some(trial), case, out))
        })
        .collect::<Result<_>>()?;
    let extra = config.extra_cases.iter().map(|case| {
        let out = verify_way(&case.model, &case.a, &case.charge, &case.psi);
        (None, case.clone(), out)
    });

    let mut report = SuiteReport::new("way", suite.count + config.extra_cases.len(), suite.seed);
    let mut max_dist = 0.0_f64;
    for (index, (trial, case, outcome)) in random.into_iter().chain(extra).enumerate() {
        match outcome {
            Ok(way) => {
                max_dist = max_dist.max(way.total_disturbance);
                let ok = way.report.holds && way.total_disturbance <= TOTAL_DISTURBANCE_TOL;
                report.record(ok, way.report.slack);
                if !ok {
                    report.failures.push(FailureDump {
                        trial,
                        report: way.report,
                        case: serde_json::to_value(&case)?,
                    });
                }
            }
            Err(e @ Error::Precondition { .. }) => {
                report.rejected += 1;
                report.rejections.push(Rejection {
                    index,
                    diagnostic: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    report.max_total_disturbance = Some(max_dist);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExhibitConfig {
    pub trials: u64,
    pub seed: u64,
    pub object_dim: usize,
    pub apparatus_dim: usize,
}

impl Default for ExhibitConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            object_dim: 2,
            apparatus_dim: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhibitReport {
    pub trials: u64,
    pub seed: u64,
    /// Exhibits found by the random search (the stored one excluded).
    pub found: usize,
    /// Stored projective exhibit first, then the search results.
    pub exhibits: Vec<Exhibit>,
}

pub fn run_exhibits(config: &ExhibitConfig) -> Result<ExhibitReport> {
    let stored =
        screen_case(heisenberg_exhibit(), ModelFamily::Stored, None)?.ok_or_else(|| {
            Error::NumericalHealth("stored exhibit no longer violates the relation".into())
        })?;
    let found = violation_search(
        config.object_dim,
        config.apparatus_dim,
        config.trials,
        config.seed,
    )
    .map_err(|e| match e {
        Error::Contract(m) => Error::Usage(m),
        other => other,
    })?;
    let mut exhibits = vec![stored];
    let count = found.len();
    exhibits.extend(found);
    Ok(ExhibitReport {
        trials: config.trials,
        seed: config.seed,
        found: count,
        exhibits,
    })
}

/// Stored exhibit plus a seeded random search.
pub fn exhibit_violation(config: &ExhibitConfig) -> Result<Produced> {
    let report = run_exhibits(config)?;
    let bad = report.exhibits.iter().filter(|e| !e.uup.holds).count();
    Ok(Produced {
        summary: format!(
            "exhibit_violation: {} exhibits ({} from {} trials)",
            report.exhibits.len(),
            report.found,
            report.trials
        ),
        violation: (bad > 0).then(|| format!("{bad} exhibits also violate the universal relation")),
        files: vec![("exhibit_violation.json".into(), json_bytes(&report)?)],
    })
}
