//! Herz-Schur symbols of scaled characters and recovery of the character.
use sepmult::groups::{builtin_group, enumerate_characters};
use sepmult::linalg::{c64, C64};
use sepmult::schur::{herz_schur_symbol, rank_one_unimodular_factor, recover_character};

fn main() -> sepmult::Result<()> {
    let g = builtin_group("cyclic(5)")?;
    let psi = &enumerate_characters(&g)?[2];
    let phi: Vec<C64> = psi.values().iter().map(|v| c64(-1.5, 0.5) * v).collect();
    let m = herz_schur_symbol(&g, &phi)?;
    println!("symbol:\n{:?}", m.matrix());
    let cert = rank_one_unimodular_factor(&m, 1e-9).expect("scaled characters factor");
    let rec = recover_character(&g, &cert, 1e-9).expect("character recovered");
    println!("recovered c = {}", rec.c);
    println!("character distance: {:.2e}", rec.character.distance(psi));
    Ok(())
}
