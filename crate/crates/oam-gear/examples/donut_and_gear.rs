//! Renders the donut-shaped input signal and the gear-shaped generated
//! light for charges 2 and 20, writing 16-bit PGM images under out/.
//!
//! ```bash
//! cargo run --example donut_and_gear
//! ```

use oam_gear::analysis::{angular_profile, petal_count, Annulus, DEFAULT_BINS};
use oam_gear::fwm::{detected_state, fwm_transfer};
use oam_gear::prep::prepared_signal;
use oam_gear::render::render;
use oam_gear::{DetectMode, FwmParams, GridSpec, PrepConfig};

fn main() -> oam_gear::Result<()> {
    std::fs::create_dir_all("out")?;
    let grid = GridSpec::default();
    let theta = 0f64.to_radians();

    for l in [2i32, 20] {
        let params = FwmParams::new(2.1, theta, DetectMode::Dominant)?;
        let signal = prepared_signal(&PrepConfig::new(l, 0.0, theta));
        let gear = detected_state(&fwm_transfer(&signal, &params), &params)?;

        let donut_img = render(&signal, &grid)?;
        let gear_img = render(&gear, &grid)?;
        let donut_path = format!("out/signal_l{l}.pgm");
        let gear_path = format!("out/fwm_l{l}.pgm");
        donut_img.write_pgm(&donut_path)?;
        gear_img.write_pgm(&gear_path)?;

        let la = l.unsigned_abs();
        let annulus = Annulus::around_ring(grid.ring_radius(la), grid.render_waist(la))?;
        let petals = petal_count(&angular_profile(&gear_img, annulus, DEFAULT_BINS)?)?;
        let donut_flat = petal_count(&angular_profile(&donut_img, annulus, DEFAULT_BINS)?);

        println!("l = {l}:");
        println!("  {donut_path}: donut, profile {:?}", donut_flat.err().map(|e| e.to_string()));
        println!("  {gear_path}: {petals} petals");
    }
    Ok(())
}
