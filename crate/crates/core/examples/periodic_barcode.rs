//! Endpoints of a periodic barcode in one period, counted from its window.

use novikov_spectra::barcode::{Bar, Barcode};
use novikov_spectra::persistence::{lsv_endpoint_count, PeriodicBarcode};
use novikov_spectra::{Exponent, Result};

fn main() -> Result<()> {
    let e = Exponent::new;
    let window = vec![
        Barcode::from_bars([Bar::infinite(e(0, 1)), Bar::finite(e(1, 8), e(3, 2))]),
        Barcode::from_bars([Bar::finite(e(-1, 3), e(1, 6))]),
        Barcode::new(),
        Barcode::from_bars([Bar::infinite(e(5, 4))]),
    ];
    let p = PeriodicBarcode::new(window, e(1, 8))?;
    println!("period A = {} every {} degrees", p.period_action(), p.period_index());
    for r in -2..6 {
        println!("  B_{r}: {}", p.degree(r));
    }
    let report = lsv_endpoint_count(&p)?;
    println!("{report:#?}");
    Ok(())
}
