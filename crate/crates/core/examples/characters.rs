//! Linear characters of the built-in groups.
use sepmult::groups::{builtin_group, commutator_subgroup, enumerate_characters};

fn main() -> sepmult::Result<()> {
    for name in [
        "cyclic(4)",
        "cyclic(2)^2",
        "symmetric(3)",
        "dihedral(4)",
        "quaternion8",
        "symmetric(4)",
    ] {
        let g = builtin_group(name)?;
        let chars = enumerate_characters(&g)?;
        let derived = commutator_subgroup(&g).len();
        println!(
            "{name}: order {}, commutator subgroup {derived}, {} characters",
            g.order(),
            chars.len()
        );
        for psi in &chars {
            let values: Vec<String> = psi
                .values()
                .iter()
                .map(|z| format!("{:+.3}{:+.3}i", z.re, z.im))
                .collect();
            println!("  [{}]", values.join(", "));
        }
    }
    Ok(())
}
