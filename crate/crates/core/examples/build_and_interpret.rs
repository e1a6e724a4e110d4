// Build a small qutrit diagram by composition and print its matrix.

use num_complex::Complex64 as C64;
use zxw::{interpret, Diagram, Dimension, GeneratorKind, PhaseVector};

pub fn run_example() -> zxw::Result<()> {
    let d = Dimension::new(3)?;
    let h = Diagram::generator(GeneratorKind::Hadamard, d)?;
    let phase = PhaseVector::new(vec![C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]);
    let z = Diagram::generator(GeneratorKind::z_box(phase, 1, 2), d)?;
    let w = Diagram::generator(GeneratorKind::w_transpose(2), d)?;

    // H, then a Z box copying onto two wires, then a W node merging them back.
    let circuit = h.then(&z)?.then(&w)?;
    let m = interpret(&circuit)?;
    println!("{}x{} matrix at d={}:", m.rows(), m.cols(), m.dim());
    print!("{}", m.chopped(1e-12));
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
