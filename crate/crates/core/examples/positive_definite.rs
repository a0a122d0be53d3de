//! Positive definiteness of functions on a group via their Herz-Schur matrix.
use sepmult::classify::positive_definite_test;
use sepmult::groups::{builtin_group, enumerate_characters};
use sepmult::linalg::{c64, C64};

fn main() -> sepmult::Result<()> {
    let g = builtin_group("cyclic(3)")?;
    let psi = enumerate_characters(&g)?[1].values().to_vec();
    let cases: [(&str, Vec<C64>); 3] = [
        ("character", psi.clone()),
        ("-1 * character", psi.iter().map(|v| -v).collect()),
        (
            "(1, 1, -1)",
            vec![c64(1.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0)],
        ),
    ];
    for (label, phi) in cases {
        let r = positive_definite_test(&g, &phi, 1e-9)?;
        println!(
            "{label:>15}: positive {}, min eigenvalue {:+.4}",
            r.positive, r.min_eigenvalue
        );
    }
    Ok(())
}
