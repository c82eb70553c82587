//! Matrix kernels: principal square root, `tr[(A^{1/2} B A^{1/2})^{1/2}]`
//! by two similarity routes, and the Bures form.
//!
//! cargo run --example hermitian_kernels

use num_complex::Complex64;
use spectral_w2::{bures_w2_squared, sqrt_psd, trace_sqrt_product, trace_sqrt_product_cholesky, HermitianMatrix, PsdPolicy};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();
    let c = Complex64::new;
    let a = HermitianMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.5, 0.3)], vec![c(0.5, -0.3), c(1.0, 0.0)]])?;
    let b = HermitianMatrix::from_rows(&[vec![c(1.0, 0.0), c(-0.2, 0.1)], vec![c(-0.2, -0.1), c(3.0, 0.0)]])?;

    let root = sqrt_psd(&a, &policy)?;
    let squared = HermitianMatrix::hermitian_part((root.as_mat() * root.as_mat()).as_ref());
    println!("||sqrt(A)² - A||_max = {:.3e}", squared.max_abs_diff(&a)?);

    let sandwich = trace_sqrt_product(&a, &b, &policy)?;
    let cholesky = trace_sqrt_product_cholesky(&a, &b, &policy)?;
    println!("tr sqrt(AB): sandwich {sandwich:.15}, Cholesky {cholesky:.15}");
    println!("Bures W2²(A, B) = {:.15}", bures_w2_squared(&a, &b, &policy)?);
    println!("Bures W2²(B, A) = {:.15}", bures_w2_squared(&b, &a, &policy)?);
    Ok(())
}
