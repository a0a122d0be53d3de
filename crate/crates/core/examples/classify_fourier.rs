//! Classifying Fourier multipliers on a group von Neumann algebra.
use std::sync::Arc;

use sepmult::classify::classify_fourier;
use sepmult::groups::{builtin_group, enumerate_characters};
use sepmult::linalg::{c64, C64};

fn main() -> sepmult::Result<()> {
    let g = Arc::new(builtin_group("symmetric(3)")?);
    let sign = enumerate_characters(&g)?.pop().expect("sign character");
    let scaled: Vec<C64> = sign.values().iter().map(|v| c64(0.0, 3.0) * v).collect();
    let mut indicator = vec![c64(0.0, 0.0); g.order()];
    indicator[g.identity()] = c64(1.0, 0.0);

    for (label, phi) in [("3i * sign", scaled), ("indicator of e", indicator)] {
        for p in [1.0, 2.0, 3.0] {
            let v = classify_fourier(&g, &phi, p, 100, 1, 1e-9)?;
            let violation = v.witness.as_ref().map_or(0.0, |w| w.violation);
            println!(
                "{label:>15} p={p}: {:?} (witness violation {violation:.3})",
                v.status
            );
        }
    }
    Ok(())
}
