// Normalize a diagram, emit its canonical normal-form diagram and render
// it for Graphviz.

use zxw::io::render_dot;
use zxw::normal_form::{emit_diagram, normalize, unique_sort};
use zxw::{Diagram, Dimension, GeneratorKind};

pub fn run_example() -> zxw::Result<()> {
    let d = Dimension::new(2)?;
    // A GHZ-like state: one spider with three outputs, Hadamard on the last.
    let ghz = Diagram::generator(GeneratorKind::spider(d, 0, 3), d)?;
    let h = Diagram::identity(d, 2).tensor(&Diagram::generator(GeneratorKind::Hadamard, d)?)?;
    let g = ghz.then(&h)?;

    let nf = normalize(&g)?;
    print!("{nf}");
    let canonical = emit_diagram(&nf);
    assert_eq!(unique_sort(&canonical)?, canonical);
    println!("normal-form diagram: {} nodes", canonical.nodes().len());
    print!("{}", render_dot(&canonical));
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
