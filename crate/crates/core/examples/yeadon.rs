//! Factoring isometries as partial isometry, positive part and Jordan map.
use std::sync::Arc;

use sepmult::classify::{yeadon_extract, LinearMap};
use sepmult::groups::builtin_group;
use sepmult::linalg::{c64, C64};
use sepmult::vna::FourierMultiplier;

fn main() -> sepmult::Result<()> {
    let t = LinearMap::transpose(3);
    let y = yeadon_extract(&t, 1e-8)?;
    println!("transpose: residuals {:?}", y.residuals);
    println!(
        "reconstruction distance {:.2e}",
        y.compose().action().distance(t.action())
    );

    let g = Arc::new(builtin_group("dihedral(3)")?);
    let phi: Vec<C64> = (0..g.order()).map(|_| c64(0.0, 1.0)).collect();
    let m = LinearMap::fourier(&FourierMultiplier::new(g.clone(), phi)?);
    let y = yeadon_extract(&m, 1e-8)?;
    println!(
        "i * identity on VN(D3): max residual {:.2e}",
        y.residuals.max()
    );
    println!("w =\n{:?}", y.w);

    let mut bad = vec![c64(1.0, 0.0); g.order()];
    bad[1] = c64(0.5, 0.0);
    let m = LinearMap::fourier(&FourierMultiplier::new(g, bad)?);
    match yeadon_extract(&m, 1e-8) {
        Ok(y) => println!(
            "unexpected factorization, residual {:.2e}",
            y.residuals.max()
        ),
        Err(e) => println!("non-isometry rejected: {e}"),
    }
    Ok(())
}
