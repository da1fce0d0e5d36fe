//! Tabulates the counter-requirement formulas for one workload.

use std::fmt::Write as _;

use rap_core::analysis::{
    check_rap_prime_constraints, gamma_alpha, rap_prime_selection, ss_required_counters, ConstraintCheck,
    RapPrimeSelection, TheoryInputs,
};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    pub inputs: TheoryInputs,
    pub gamma_domain: f64,
    pub ss_counters: u128,
    /// `Err` holds the reason no selection exists (skew regime).
    pub rap_prime: std::result::Result<RapPrimeSelection, String>,
    /// Constraint checks for the selected pair, when it fits the domain.
    pub constraints: Option<ConstraintCheck>,
    /// Constraint checks for Space Saving (`P = 1`, `m = m_SS`).
    pub ss_constraints: Option<ConstraintCheck>,
}

pub fn theory_report(inputs: &TheoryInputs) -> Result<TheoryReport> {
    let ss_counters = ss_required_counters(inputs)?;
    let rap_prime = rap_prime_selection(inputs).map_err(|e| e.to_string());
    let constraints = rap_prime
        .as_ref()
        .ok()
        .and_then(|sel| check_rap_prime_constraints(inputs, sel.admission_probability, sel.counters).ok());
    let ss_constraints = check_rap_prime_constraints(inputs, 1.0, ss_counters).ok();
    Ok(TheoryReport {
        inputs: *inputs,
        gamma_domain: gamma_alpha(inputs.alpha, inputs.domain),
        ss_counters,
        rap_prime,
        constraints,
        ss_constraints,
    })
}

impl TheoryReport {
    /// `quantity,value` table with a commented header.
    pub fn render(&self) -> String {
        let i = &self.inputs;
        let mut out = String::new();
        let _ = writeln!(out, "# rapbench theory");
        let _ = writeln!(out, "# k={} alpha={} domain={} c={}", i.k, i.alpha, i.domain, i.c_const);
        out.push_str("quantity,value\n");
        let _ = writeln!(out, "gamma_alpha_domain,{}", self.gamma_domain);
        let _ = writeln!(out, "ss_required_counters,{}", self.ss_counters);
        match &self.rap_prime {
            Ok(sel) => {
                let _ = writeln!(out, "rap_prime_admission_probability,{}", sel.admission_probability);
                let _ = writeln!(out, "rap_prime_counters,{}", sel.counters);
            }
            Err(reason) => {
                let _ = writeln!(out, "# rap_prime: {reason}");
            }
        }
        let fmt = |c: &Option<ConstraintCheck>, which: fn(&ConstraintCheck) -> bool| match c {
            Some(c) => which(c).to_string(),
            None => "n/a".to_string(),
        };
        if self.rap_prime.is_ok() {
            let _ = writeln!(out, "rap_prime_constraint_admission,{}", fmt(&self.constraints, |c| c.admission));
            let _ = writeln!(out, "rap_prime_constraint_keep_counter,{}", fmt(&self.constraints, |c| c.keep_counter));
        }
        let _ = writeln!(out, "ss_constraint_keep_counter,{}", fmt(&self.ss_constraints, |c| c.keep_counter));
        out
    }
}
