//! Schatten norms, SVD and polar decomposition of a random matrix.
use sepmult::linalg::{polar_decompose, schatten_norm, svd, ComplexMatrix};
use sepmult::sample::{random_matrix, rng_from_seed};

fn main() -> sepmult::Result<()> {
    let mut rng = rng_from_seed(7);
    let a = random_matrix(&mut rng, 4);
    let s = svd(&a)?;
    println!("singular values: {:?}", s.sigma);
    println!("svd residual: {:.2e}", s.reconstruct().distance(&a));
    for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        println!("||a||_{p} = {:.6}", schatten_norm(&a, p, 1.0)?);
    }

    // a rank-two matrix: the partial isometry is not unitary
    let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[2.0, 4.0, 0.0], &[0.0, 0.0, 3.0]])?;
    let polar = polar_decompose(&x, 1e-9)?;
    println!("polar residual: {:.2e}", (&polar.w * &polar.b).distance(&x));
    println!("w*w =\n{:?}", &polar.w.adjoint() * &polar.w);
    Ok(())
}
