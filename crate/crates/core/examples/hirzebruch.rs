//! The deformed Z_k mapped into P^1 x P^(k+1); the defining equations hold
//! in both charts for symbolic t.

use twochart::geometry::{hirzebruch_images, hirzebruch_verify_images};

fn main() -> twochart::Result<()> {
    let images = hirzebruch_images(3)?;
    println!("{} (U chart)", images.space.name());
    println!("  l = [{}, {}]", images.u.l[0], images.u.l[1]);
    for (i, x) in images.u.x.iter().enumerate() {
        println!("  x{i} = {x}");
    }
    for k in 2..=5 {
        println!("k = {k}: {:?}", hirzebruch_verify_images(&hirzebruch_images(k)?)?);
    }
    Ok(())
}
