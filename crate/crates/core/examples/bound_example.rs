//! Writes the inputs of the shipped `bound-report` example: the weight 10
//! lift `f`, the monic `Q = X^2 - f^2` with `Q(f) = 0`, and a box of sample
//! points around `(tau1, z) = (i, 0)`.
//!
//! Usage: `cargo run --example bound_example -- [DIR]` (default `data`).

use std::fs;
use std::path::PathBuf;

use fourier_jacobi::arith::{int, ComplexVal};
use fourier_jacobi::convergence::CompactBoxSpec;
use fourier_jacobi::fjseries::{lift_from_table, FormalFJ, PolynomialOverM};
use fourier_jacobi::jacobi::weight_ten_cusp_table;
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let (m_max, prec) = (8, 8);
    let f = lift_from_table(&weight_ten_cusp_table(4 * (prec - 1) * m_max + 1), m_max, prec)?;
    let q = PolynomialOverM::new(
        0,
        10,
        vec![
            f.multiply(&f).scalar_mul(&int(-1)),
            FormalFJ::zero(10, m_max, prec),
            FormalFJ::one(m_max, prec),
        ],
    )?;
    let bx = CompactBoxSpec::disc(ComplexVal::new(0.0, 1.0), 0.2, 5, 0.1)?;
    let points: Vec<[f64; 4]> = bx
        .points
        .iter()
        .map(|(t, z)| [t.re, t.im, z.re, z.im])
        .collect();
    fs::write(dir.join("lift10.json"), serde_json::to_string(&f.to_json())?)?;
    fs::write(dir.join("poly.json"), serde_json::to_string(&q.to_json())?)?;
    fs::write(
        dir.join("box.json"),
        serde_json::to_string_pretty(&json!({ "eps": bx.eps, "points": points }))?,
    )?;
    Ok(())
}
