//! Merge gains for a few structural tuples, LRM next to modularity.

use gscarf::metrics::{log_lrm, lrm_gain, modularity_gain, StructTuple};

fn main() {
    let two_m = 100;
    println!("{:>24} {:>10} {:>10}", "tuple <ei,ai,ej,aj,eij>", "dL", "dQ");
    for t in [
        StructTuple::new(0, 2, 0, 2, 1),
        StructTuple::new(0, 10, 0, 10, 1),
        StructTuple::new(20, 30, 20, 30, 5),
        StructTuple::new(20, 30, 0, 2, 1),
        StructTuple::new(40, 50, 40, 50, 5),
    ] {
        let label = format!("<{},{},{},{},{}>", t.e_i, t.a_i, t.e_j, t.a_j, t.e_ij);
        println!("{label:>24} {:>10.5} {:>10.5}", lrm_gain(&t, two_m), modularity_gain(&t, two_m));
    }

    println!("\nper-cluster L for a = 20, 2m = {two_m}");
    for e in [0, 4, 8, 12, 16, 20] {
        println!("  e = {e:>2}  L = {:.5}", log_lrm(e, 20, two_m));
    }
}
