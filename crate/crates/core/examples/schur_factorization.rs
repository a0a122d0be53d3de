//! Rank-one unimodular factorization of Schur symbols.
use sepmult::classify::classify_schur;
use sepmult::linalg::{c64, ComplexMatrix};
use sepmult::schur::{rank_one_unimodular_factor, SchurSymbol};

fn main() -> sepmult::Result<()> {
    let alpha = [c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)];
    let beta = [c64(0.6, 0.8), c64(1.0, 0.0), c64(0.0, -1.0)];
    let c = c64(2.0, -1.0);
    let rank_one = SchurSymbol::new(ComplexMatrix::from_fn(3, |i, j| c * alpha[i] * beta[j]));
    let cert = rank_one_unimodular_factor(&rank_one, 1e-9).expect("factorable");
    println!("c = {}, residual {:.2e}", cert.c, cert.residual(&rank_one));

    let hadamard = SchurSymbol::new(ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])?);
    println!(
        "hadamard factorable: {}",
        rank_one_unimodular_factor(&hadamard, 1e-9).is_some()
    );
    println!("hadamard minor defect: {:.3}", hadamard.minor_defect());

    for (label, m) in [("rank one", &rank_one), ("hadamard", &hadamard)] {
        let v = classify_schur(m, 2.0, 100, 0, 1e-9)?;
        println!(
            "{label}: {:?}, max deviation {:.2e}",
            v.status,
            v.max_deviation.unwrap_or(0.0)
        );
    }
    Ok(())
}
