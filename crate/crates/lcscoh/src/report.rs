//! Shared reporting types: itemized pass/fail reports for identity
//! suites and the JSON run report emitted by the command line tool.

use serde::Serialize;
use std::fmt;

use crate::exterior::GradedOperator;

#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

impl CheckItem {
    pub fn pass(name: &str) -> Self {
        CheckItem {
            name: name.to_owned(),
            ok: true,
            detail: None,
        }
    }

    pub fn fail(name: &str, detail: &str) -> Self {
        CheckItem {
            name: name.to_owned(),
            ok: false,
            detail: Some(detail.to_owned()),
        }
    }

    pub fn from_bool(name: &str, ok: bool, detail_on_fail: &str) -> Self {
        if ok {
            CheckItem::pass(name)
        } else {
            CheckItem::fail(name, detail_on_fail)
        }
    }

    /// Passes iff the operator is identically zero; on failure records the
    /// first degree and matrix entry witnessing the violation.
    pub fn expect_zero(name: &str, op: &GradedOperator) -> Self {
        for (h, block) in op.blocks.iter().enumerate() {
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    if !num::Zero::is_zero(&block[(r, c)]) {
                        return CheckItem::fail(
                            name,
                            &format!(
                                "nonzero on degree {h}: entry ({r},{c}) = {}",
                                block[(r, c)]
                            ),
                        );
                    }
                }
            }
        }
        CheckItem::pass(name)
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub title: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(title: &str) -> Self {
        CheckReport {
            title: title.to_owned(),
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn all_ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for item in &self.items {
            let mark = if item.ok { "ok  " } else { "FAIL" };
            match &item.detail {
                Some(d) => writeln!(f, "  [{mark}] {} ({d})", item.name)?,
                None => writeln!(f, "  [{mark}] {}", item.name)?,
            }
        }
        Ok(())
    }
}

/// Machine-readable summary of one CLI invocation.
#[derive(Serialize, Debug)]
pub struct RunReport {
    pub operation: String,
    pub inputs: serde_json::Value,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
