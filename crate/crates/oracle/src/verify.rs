//! High-level verification driver shared by the command line and the
//! acceptance suite.

use serde::{Deserialize, Serialize};

use slchar_core::{GroupParams, OrbitTable};

use crate::cache::OracleCache;
use crate::classes::ClassData;
use crate::error::OracleResult;
use crate::group::{GroupKind, MatrixGroup};
use crate::matching::{Check, GroupData, MatchOutcome, Pipeline};
use crate::table::character_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Counts,
    Degrees,
    Ggc,
    Auto,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "counts" => Some(Suite::Counts),
            "degrees" => Some(Suite::Degrees),
            "ggc" => Some(Suite::Ggc),
            "auto" => Some(Suite::Auto),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub suite: String,
    pub passed: bool,
    pub unit: Option<u64>,
    pub units_ok: Vec<u64>,
    pub ambiguity_classes: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

/// Build (or load from cache) group, classes, and table.
pub fn group_data(
    params: &GroupParams,
    kind: GroupKind,
    cache: &OracleCache,
) -> OracleResult<GroupData> {
    let group = MatrixGroup::build(params, kind)?;
    if let Some((classes, table)) = cache.load(params, kind, group.order()) {
        return Ok(GroupData {
            group,
            classes,
            table,
        });
    }
    let classes = ClassData::compute(&group)?;
    let table = character_table(&group, &classes)?;
    cache.store(params, kind, group.order(), &classes, &table)?;
    Ok(GroupData {
        group,
        classes,
        table,
    })
}

/// Run the oracle pipeline for one parameter set.
pub fn run_pipeline(params: &GroupParams, cache: &OracleCache) -> OracleResult<MatchOutcome> {
    let orbit_table = OrbitTable::for_group(params)?;
    let gl = group_data(params, GroupKind::Full, cache)?;
    let sl = group_data(params, GroupKind::Special, cache)?;
    Pipeline {
        params: *params,
        orbit_table: &orbit_table,
        gl: &gl,
        sl: &sl,
    }
    .run()
}

/// Run the selected suite, producing a printable report.  `Counts` and
/// `Degrees` only need the special group; the others run the full
/// matching pipeline.
pub fn run_suite(params: &GroupParams, suite: Suite, cache: &OracleCache) -> OracleResult<VerifyReport> {
    let mut checks: Vec<Check> = Vec::new();
    let mut unit = None;
    let mut units_ok = Vec::new();
    let mut ambiguity = Vec::new();

    match suite {
        Suite::Counts => {
            let orbit_table = OrbitTable::for_group(params)?;
            let labels = slchar_core::sl::sl_class_count(&orbit_table)?;
            let sl = group_data(params, GroupKind::Special, cache)?;
            checks.push(check_eq(
                format!("{}: class number", params.sl_name()),
                labels,
                sl.classes.count() as u64,
            ));
        }
        Suite::Degrees => {
            let orbit_table = OrbitTable::for_group(params)?;
            let mut label_degs: Vec<u64> = Vec::new();
            slchar_core::sl::for_each_family(&orbit_table, |fam| {
                let d = fam.constituent_degree(&orbit_table);
                use num_traits::ToPrimitive;
                let d = d.to_u64().unwrap();
                for _ in 0..fam.a_lambda {
                    label_degs.push(d);
                }
            })?;
            label_degs.sort_unstable();
            let sl = group_data(params, GroupKind::Special, cache)?;
            let mut oracle_degs = sl.table.degrees.clone();
            oracle_degs.sort_unstable();
            checks.push(check_eq(
                format!("{}: degree multiset", params.sl_name()),
                label_degs,
                oracle_degs,
            ));
        }
        Suite::Ggc | Suite::Auto | Suite::All => {
            let outcome = run_pipeline(params, cache)?;
            unit = Some(outcome.unit);
            units_ok = outcome.units_ok.clone();
            let orbit_table = OrbitTable::for_group(params)?;
            let labels = slchar_core::gl::enumerate_gl_chars(&orbit_table)?;
            for class in &outcome.ambiguity {
                ambiguity.push(
                    class
                        .iter()
                        .map(|&i| {
                            serde_json::to_string(&slchar_core::jsonio::gl_label_to_json(
                                &orbit_table,
                                &labels[i],
                            ))
                            .unwrap_or_default()
                        })
                        .collect(),
                );
            }
            checks.extend(outcome.checks);
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        group: params.sl_name(),
        suite: format!("{suite:?}").to_lowercase(),
        passed,
        unit,
        units_ok,
        ambiguity_classes: ambiguity,
        checks,
    })
}

fn check_eq<T: PartialEq + std::fmt::Debug>(name: String, expected: T, actual: T) -> Check {
    Check {
        name,
        passed: expected == actual,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verify {} suite={} => {}\n",
            self.group,
            self.suite,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        if let Some(u) = self.unit {
            out.push_str(&format!(
                "  calibrated unit: {u} (all consistent: {:?})\n",
                self.units_ok
            ));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} (expected {}, got {})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.actual
            ));
        }
        if !self.ambiguity_classes.is_empty() {
            out.push_str(&format!(
                "  ambiguity classes (setwise-verified): {}\n",
                self.ambiguity_classes.len()
            ));
        }
        out
    }
}
