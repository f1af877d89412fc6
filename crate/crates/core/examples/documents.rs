//! JSON documents in and out, and an SVG rendering of the barcode.

use novikov_spectra::io::{BarcodeDocument, ComplexDocument};
use novikov_spectra::plot::barcode_svg;
use novikov_spectra::Result;

const DOC: &str = r#"{
  "generators": [
    { "name": "x", "degree": 0, "filtration": "1/2" },
    { "name": "y", "degree": 1, "filtration": "2" },
    { "name": "z", "degree": 1, "filtration": "3/4" }
  ],
  "differential": [ { "from": "y", "to": "x", "coeff": ["0", "1/3"] } ]
}"#;

fn main() -> Result<()> {
    let parsed = ComplexDocument::parse(DOC)?.build()?;
    let barcode = parsed.complex.barcode(None)?;
    println!("barcode: {barcode}");
    println!("{}", BarcodeDocument::from_barcode(&barcode).to_json());

    let again = ComplexDocument::from_complex(&parsed.complex, &[]).to_json();
    assert_eq!(ComplexDocument::parse(&again)?.build()?.complex.barcode(None)?, barcode);

    match ComplexDocument::parse(r#"{ "generators": [ { "name": "x", "filtration": "1/0" } ], "differential": [] }"#)
        .and_then(|d| d.build())
    {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }

    let path = std::env::temp_dir().join("novikov-barcode.svg");
    std::fs::write(&path, barcode_svg(&barcode, "three generators"))?;
    println!("wrote {}", path.display());
    Ok(())
}
