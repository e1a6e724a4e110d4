// Write a diagram document, read it back and render it.

use zxw::io::{parse, render_dot, serialize};
use zxw::rules::build::{pink, seq, w_state};
use zxw::Dimension;

pub fn run_example() -> zxw::Result<()> {
    let d = Dimension::new(3)?;
    let g = seq(&[w_state(d, 2)?, pink(d, 1, 2, 1)?])?;
    let text = serialize(&g);
    let path = std::env::temp_dir().join(format!("zxw-document-io-{}.json", std::process::id()));
    std::fs::write(&path, &text).map_err(|e| zxw::ZxwError::Parse(e.to_string()))?;

    let back =
        parse(&std::fs::read_to_string(&path).map_err(|e| zxw::ZxwError::Parse(e.to_string()))?)?;
    let _ = std::fs::remove_file(&path);
    assert_eq!(back, g);
    assert_eq!(serialize(&back), text);
    println!(
        "{} bytes, {} nodes, byte-stable round trip",
        text.len(),
        back.nodes().len()
    );
    print!("{}", render_dot(&back));
    Ok(())
}

fn main() -> zxw::Result<()> {
    run_example()
}
