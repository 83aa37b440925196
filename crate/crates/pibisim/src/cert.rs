//! Certificate serialization.
//!
//! The JSON layout is fixed: keys appear in declaration order and every
//! formula is rendered in the concrete syntax accepted by the parser (the
//! bound base certificates use the reserved `?` binder, which is display
//! only).

use serde::{Deserialize, Serialize};

use crate::pretty::{pp_formula, pp_process};
use crate::syntax::{Form, Pr};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub formula_left: String,
    pub formula_right: String,
    pub validated: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub left: String,
    pub right: String,
    pub bisimilar: bool,
    pub certificates: Vec<CertificateEntry>,
}

impl CertificateReport {
    pub fn new(p: &Pr, q: &Pr, bisimilar: bool) -> CertificateReport {
        CertificateReport {
            left: pp_process(p),
            right: pp_process(q),
            bisimilar,
            certificates: Vec::new(),
        }
    }

    pub fn push(&mut self, fl: &Form, fr: &Form, validated: bool) {
        self.certificates.push(CertificateEntry {
            formula_left: pp_formula(fl),
            formula_right: pp_formula(fr),
            validated,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate report serializes")
    }
}
