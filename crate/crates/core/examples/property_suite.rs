//! Run every seeded property over a small range of seeds.

use novikov_spectra::suite::{run_suite, Property};

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    for p in Property::ALL {
        let s = run_suite(p, 0..seeds);
        println!("{s} in {:.2?}", s.elapsed);
        for (seed, msg) in &s.failures {
            println!("  seed {seed}: {msg}");
        }
    }
}
