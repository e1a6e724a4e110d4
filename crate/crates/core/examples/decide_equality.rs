// Decide equality of diagrams through their normal forms.

use num_complex::Complex64 as C64;
use zxw::{decide_equal, Diagram, Dimension, GeneratorKind, PhaseVector};

pub fn run_example() -> zxw::Result<()> {
    let d = Dimension::new(4)?;
    let h = Diagram::generator(GeneratorKind::Hadamard, d)?;
    let hd = Diagram::generator(GeneratorKind::HadamardDagger, d)?;
    let hhh = h.then(&h)?.then(&h)?;
    println!("H H H == H-dagger at d=4: {}", decide_equal(&hhh, &hd));

    let phases = |x: f64| {
        PhaseVector::new(vec![
            C64::new(x, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 1.0),
        ])
    };
    let z = Diagram::generator(GeneratorKind::z_box(phases(1.0), 1, 1), d)?;
    let z_shifted = Diagram::generator(GeneratorKind::z_box(phases(1.001), 1, 1), d)?;
    println!(
        "Z box vs the same box shifted by 1e-3: {}",
        decide_equal(&z, &z_shifted)
    );

    let dual = Diagram::generator(GeneratorKind::Dualiser, d)?;
    println!(
        "D D == identity: {}",
        decide_equal(&dual.then(&dual)?, &Diagram::identity(d, 1))
    );
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
