// Fuse two Z boxes with the S1 rule at an explicit anchor, then undo it.

use num_complex::Complex64 as C64;
use zxw::rules::{builtin_rules, find_rule, ParamValue};
use zxw::{
    apply_at, interpret, matrices_equal, Diagram, Dimension, Direction, GeneratorKind, PhaseVector,
    RuleParams,
};

pub fn run_example() -> zxw::Result<()> {
    let d = Dimension::new(3)?;
    let rules = builtin_rules();
    let s1 = find_rule(&rules, "S1").expect("S1 is built in");
    let a = PhaseVector::new(vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)]);
    let b = PhaseVector::new(vec![C64::new(-1.0, 0.5), C64::new(3.0, 0.0)]);
    let params = RuleParams(vec![
        ParamValue::Phases(a),
        ParamValue::Phases(b),
        ParamValue::Int(1),
    ]);

    // Put the left-hand side between two Hadamards and remember where its
    // nodes went: that map is the anchor.
    let pattern = s1.lhs(d, &params)?;
    let h = Diagram::generator(GeneratorKind::Hadamard, d)?;
    let (g, anchor) = h.compose_seq_mapped(&pattern)?;
    let g = g.then(&h.tensor(&h)?)?;

    let (fused, inserted) = apply_at(&g, s1, &params, &anchor, Direction::Forward)?;
    println!(
        "{} nodes before, {} after fusing",
        g.nodes().len(),
        fused.nodes().len()
    );
    for id in inserted.values() {
        println!("new node {id}: {}", fused.node(*id).expect("inserted").kind);
    }
    let (back, _) = apply_at(&fused, s1, &params, &inserted, Direction::Backward)?;
    let same = matrices_equal(&interpret(&g)?, &interpret(&back)?, 1e-9);
    println!(
        "split back into {} nodes, same matrix: {same}",
        back.nodes().len()
    );
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
