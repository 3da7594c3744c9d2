//! Audit records shared by the property checks.

use serde::Serialize;

/// One checked statement.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyItem {
    pub name: String,
    /// `false` when the statement's hypothesis did not hold (vacuous).
    pub applicable: bool,
    pub holds: bool,
    /// Smallest signed slack observed; negative means a violation.
    pub worst_margin: f64,
}

impl PropertyItem {
    pub fn checked(name: impl Into<String>, worst_margin: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            applicable: true,
            holds: worst_margin >= -tol,
            worst_margin,
        }
    }

    pub fn boolean(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            applicable: true,
            holds,
            worst_margin: if holds { 0.0 } else { -1.0 },
        }
    }

    pub fn vacuous(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            applicable: false,
            holds: true,
            worst_margin: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub title: String,
    pub hypotheses_met: bool,
    pub items: Vec<PropertyItem>,
}

impl PropertyReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            hypotheses_met: true,
            items: Vec::new(),
        }
    }

    pub fn not_applicable(title: impl Into<String>) -> Self {
        Self {
            hypotheses_met: false,
            ..Self::new(title)
        }
    }

    pub fn push(&mut self, item: PropertyItem) {
        self.items.push(item);
    }

    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }

    pub fn item(&self, name: &str) -> Option<&PropertyItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyItem> {
        self.items.iter().filter(|i| !i.holds)
    }
}
