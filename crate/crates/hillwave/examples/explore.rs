use hillwave::classify::find_pairing_zero;
use hillwave::closedform;
use hillwave::waves::WaveParams;

fn main() {
    let g_star = find_pairing_zero(0.5, 1.0, 2.0, 2.6).unwrap();
    let p = WaveParams::new(g_star, 0.5, 1.0).unwrap();
    println!("g* = {g_star:.15}");
    println!("pairing(g*) = {:.6e}", closedform::pairing_lplus_inv(&p).unwrap());
    // slope of pairing in g to see attainable |pairing| with xtol=1e-13
    let h = 1e-7;
    let pp = closedform::pairing_lplus_inv(&WaveParams::new(g_star+h, 0.5, 1.0).unwrap()).unwrap();
    let pm = closedform::pairing_lplus_inv(&WaveParams::new(g_star-h, 0.5, 1.0).unwrap()).unwrap();
    println!("dpairing/dg = {:.3e}", (pp-pm)/(2.0*h));
}
