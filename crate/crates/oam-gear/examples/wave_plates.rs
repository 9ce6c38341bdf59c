//! Wave-plate basics: angle doubling, circular polarization, unitarity.
//!
//! ```bash
//! cargo run --example wave_plates
//! ```

use oam_gear::elements::{hwp, qwp};
use oam_gear::{HybridState, OamIndex, PolAxis};

fn main() -> oam_gear::Result<()> {
    let vertical = HybridState::basis_state(OamIndex(0), PolAxis::V);
    let horizontal = HybridState::basis_state(OamIndex(0), PolAxis::H);

    println!("half-wave plate: fast axis at chi doubles the polarization angle");
    for chi_deg in [0.0, 11.25, 22.5, 45.0] {
        let out = hwp((chi_deg as f64).to_radians()).apply(&vertical)?;
        let a_h = out.amplitude(OamIndex(0), PolAxis::H);
        let a_v = out.amplitude(OamIndex(0), PolAxis::V);
        // Linear output: the angle from vertical is atan2(|aH|, |aV|) with
        // the sign carried by the real amplitudes.
        let angle = a_h.re.atan2(a_v.re).to_degrees();
        println!("  chi = {chi_deg:>6.2}°  ->  output at {angle:>7.2}° from vertical");
    }

    println!("\nquarter-wave plate at 45°: horizontal in, circular out");
    let out = qwp(45f64.to_radians()).apply(&horizontal)?;
    let a_h = out.amplitude(OamIndex(0), PolAxis::H);
    let a_v = out.amplitude(OamIndex(0), PolAxis::V);
    println!(
        "  |a_H| = {:.6}, |a_V| = {:.6}, relative phase = {:+.2}°",
        a_h.norm(),
        a_v.norm(),
        (a_v / a_h).arg().to_degrees()
    );

    println!("\nunitarity defect over a few angles (max |O†O − I| entry):");
    let mut worst = 0.0f64;
    for k in 0..100 {
        let chi = -std::f64::consts::PI + k as f64 * 0.063;
        worst = worst.max(hwp(chi).unitarity_defect());
        worst = worst.max(qwp(chi).unitarity_defect());
    }
    println!("  {worst:.3e}");
    Ok(())
}
