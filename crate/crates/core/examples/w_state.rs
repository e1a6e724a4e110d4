// The qudit W state from a W node fed by a triangle-prepared state.

use zxw::basis::digits;
use zxw::interpret;
use zxw::rules::build::w_state;
use zxw::Dimension;

pub fn run_example() -> zxw::Result<()> {
    for n in [2, 3] {
        let d = Dimension::new(n)?;
        let v = interpret(&w_state(d, 3)?)?.to_state_vector();
        // The diagram is sqrt(3(d-1)) times the normalised W state.
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        println!(
            "d={n}: norm {norm:.6} (expected {:.6})",
            (3.0 * (n as f64 - 1.0)).sqrt()
        );
        for (i, a) in v.iter().enumerate().filter(|(_, a)| a.norm() > 1e-12) {
            let ket: String = digits(i, n, 3).iter().map(|x| x.to_string()).collect();
            println!("  |{ket}> {:.3}", a.re);
        }
    }
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
