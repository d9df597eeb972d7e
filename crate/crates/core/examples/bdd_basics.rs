//! ROBDD tour: build, count, quantify, rename and draw.

use avmc::bdd::{BddManager, BddVar};

fn main() -> Result<(), avmc::bdd::BddError> {
    let mut m = BddManager::new(4);
    let [a, b, c, d] = [0, 1, 2, 3].map(|v| m.var(BddVar(v)).unwrap());

    let ab = m.xor(a, b)?;
    println!("a xor b: {} decision nodes, {} of 4 assignments", m.size(ab)?, m.sat_count(ab, 2)?);

    // (a & b) | (c & d) under order a < b < c < d
    let left = m.and(a, b)?;
    let right = m.and(c, d)?;
    let f = m.or(left, right)?;
    println!("f: {} nodes, {} models over 4 vars", m.size(f)?, m.sat_count(f, 4)?);
    println!("one model: {:?}", m.pick_one(f)?);

    let ex = m.exists(f, &[BddVar(0), BddVar(1)])?;
    println!("exists a,b. f is valid: {}", m.is_true(ex));
    let g = m.restrict(f, BddVar(2), false)?;
    println!("f with c = 0 is a & b: {}", g == left);

    // swapping the two halves gives the same function
    let g = m.rename(f, &[(BddVar(0), BddVar(2)), (BddVar(1), BddVar(3)), (BddVar(2), BddVar(0)), (BddVar(3), BddVar(1))])?;
    println!("rename is a symmetry of f: {}", g == f);

    let not_f = m.not(f)?;
    let back = m.not(not_f)?;
    println!("double negation returns the same node: {}", back == f);
    println!("invariant violations: {}", m.check_invariants().len());

    let names: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    print!("{}", m.to_dot(f, Some(&names))?);
    Ok(())
}
