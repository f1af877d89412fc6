//! Bottleneck distance with a matching witness, and its quotient by shifts.

use novikov_spectra::barcode::{Bar, Barcode};
use novikov_spectra::persistence::{bottleneck, bottleneck_mod_shift};
use novikov_spectra::Exponent;

fn main() {
    let e = Exponent::new;
    let b1 = Barcode::from_bars([Bar::finite(e(0, 1), e(1, 1)), Bar::finite(e(2, 1), e(1, 4)), Bar::infinite(e(0, 1))]);
    let b2 = Barcode::from_bars([Bar::finite(e(1, 2), e(3, 2)), Bar::infinite(e(1, 4))]);

    let (d, m) = bottleneck(&b1, &b2);
    println!("d = {d}");
    let (l, r): (Vec<&Bar>, Vec<&Bar>) = (b1.bars().collect(), b2.bars().collect());
    for (i, j) in &m.pairs {
        println!("  {} <-> {}", l[*i], r[*j]);
    }
    for i in &m.unmatched_left {
        println!("  {} deleted", l[*i]);
    }
    assert!(m.is_valid_for(&b1, &b2));

    let s = bottleneck_mod_shift(&b1, &b2);
    println!("modulo shifts: {} at shift {}", s.distance, s.shift);
}
