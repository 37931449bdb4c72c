//! CSV emitters for plotting. Floats carry 17 significant digits.

use std::f64::consts::PI;
use std::fmt::Write as _;

use qaoa_core::{Graph, MaxCutProblem, ParameterVector, Strategy};

use crate::error::{BenchError, Result};
use crate::experiment::ResultSet;

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Columns `instance,strategy,p,F_star,alpha,nfev_cumulative`, sorted by
/// (instance, strategy, p).
pub fn emit_alpha_table(rs: &ResultSet) -> Result<String> {
    if rs.records.is_empty() {
        return Err(BenchError::InvalidArgument("result set has no records".into()));
    }
    let mut rows: Vec<_> = rs.records.iter().collect();
    rows.sort_by(|a, b| {
        (&a.instance, a.record.strategy, a.record.depth).cmp(&(
            &b.instance,
            b.record.strategy,
            b.record.depth,
        ))
    });

    let mut out = String::from("instance,strategy,p,F_star,alpha,nfev_cumulative\n");
    let mut group: Option<(&str, Strategy)> = None;
    let mut cumulative = 0u64;
    for r in rows {
        let key = (r.instance.as_str(), r.record.strategy);
        if group != Some(key) {
            group = Some(key);
            cumulative = 0;
        }
        cumulative += r.record.nfev;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.instance,
            r.record.strategy,
            r.record.depth,
            f(r.record.f_star),
            f(r.record.alpha),
            cumulative
        )
        .unwrap();
    }
    Ok(out)
}

/// Long-format optimal angles: one row `p,j,gamma_j,beta_j` per depth and
/// layer, with `j` 1-based.
pub fn emit_params_trace(rs: &ResultSet, instance: &str, strategy: Strategy) -> Result<String> {
    let mut records: Vec<_> = rs.records_for(instance, strategy).collect();
    if records.is_empty() {
        return Err(BenchError::InvalidArgument(format!(
            "no records for {instance}/{strategy}"
        )));
    }
    records.sort_by_key(|r| r.depth);
    let mut out = String::from("p,j,gamma_j,beta_j\n");
    for r in records {
        let phi = &r.phi_star;
        for (j, (g, b)) in phi.gammas().iter().zip(phi.betas()).enumerate() {
            writeln!(out, "{},{},{},{}", r.depth, j + 1, f(*g), f(*b)).unwrap();
        }
    }
    Ok(out)
}

/// The p = 1 landscape `gamma,beta,alpha` on a `resolution` x `resolution`
/// grid over gamma in [0, 2pi) and beta in [0, pi).
pub fn emit_landscape(graph: &Graph, resolution: usize) -> Result<String> {
    if resolution < 2 {
        return Err(BenchError::InvalidArgument(
            "resolution must be at least 2".into(),
        ));
    }
    let problem = MaxCutProblem::new(graph.clone())?;
    let mut out = String::from("gamma,beta,alpha\n");
    for i in 0..resolution {
        let gamma = 2.0 * PI * i as f64 / resolution as f64;
        for j in 0..resolution {
            let beta = PI * j as f64 / resolution as f64;
            let phi = ParameterVector::new(vec![gamma], vec![beta])?;
            let alpha = problem.approximation_ratio(problem.expectation(&phi))?;
            writeln!(out, "{},{},{}", f(gamma), f(beta), f(alpha)).unwrap();
        }
    }
    Ok(out)
}
