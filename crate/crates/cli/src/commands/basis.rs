//! `bellsim basis`: all D^2 Bell states with symmetry classes and the
//! overlap matrix.

use std::path::Path;

use serde::Serialize;
use serde_json::json;

use bellsim_core::bell::{
    bell_state, overlap_matrix, symmetry_class, BellLabel, ModeSpace, SymmetryClass,
};

use crate::output::{csv_bytes, format_overlap, OutDir};
use crate::{classify, CliError, FormatArg};

#[derive(Serialize)]
struct AmplitudeRecord {
    oam_a: i32,
    oam_b: i32,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct StateRecord {
    m: usize,
    n: usize,
    symmetry: SymmetryClass,
    amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Serialize)]
struct CensusRecord {
    symmetric: usize,
    antisymmetric: usize,
    neither: usize,
}

#[derive(Serialize)]
struct BasisDocument {
    dimension: usize,
    lowest_oam: i32,
    census: CensusRecord,
    states: Vec<StateRecord>,
}

pub fn run(
    dim: usize,
    lowest_oam: Option<i32>,
    format: FormatArg,
    out: &Path,
    seed: u64,
) -> Result<(), CliError> {
    if !(2..=8).contains(&dim) {
        return Err(CliError::Usage(format!(
            "--dim must be in 2..=8, got {dim}"
        )));
    }
    let space = match lowest_oam {
        Some(lo) => ModeSpace::new(dim, lo),
        None if dim == 4 => Ok(ModeSpace::four_dim()),
        None => ModeSpace::for_dimension(dim),
    }
    .map_err(classify)?;

    let labels = BellLabel::all(dim);
    let mut states = Vec::with_capacity(labels.len());
    let mut records = Vec::with_capacity(labels.len());
    let mut census = CensusRecord {
        symmetric: 0,
        antisymmetric: 0,
        neither: 0,
    };
    for label in &labels {
        let psi = bell_state(&space, label).map_err(classify)?;
        let symmetry = symmetry_class(&space, label).map_err(classify)?;
        match symmetry {
            SymmetryClass::Symmetric => census.symmetric += 1,
            SymmetryClass::Antisymmetric => census.antisymmetric += 1,
            SymmetryClass::Neither => census.neither += 1,
        }
        let amplitudes = psi
            .iter()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|((a, b), amp)| AmplitudeRecord {
                oam_a: a.0,
                oam_b: b.0,
                re: amp.re,
                im: amp.im,
            })
            .collect();
        records.push(StateRecord {
            m: label.mode_shift(),
            n: label.phase_index(),
            symmetry,
            amplitudes,
        });
        states.push(psi);
    }
    let overlaps = overlap_matrix(&states, &states).map_err(classify)?;

    let census_counts = (census.symmetric, census.antisymmetric, census.neither);
    let mut dir = OutDir::create(out)?;
    match format {
        FormatArg::Json => {
            let doc = BasisDocument {
                dimension: dim,
                lowest_oam: space.lowest_oam(),
                census,
                states: records,
            };
            dir.write_json("states.json", &doc)?;
        }
        FormatArg::Csv => {
            let mut rows = vec![vec![
                "m".to_string(),
                "n".to_string(),
                "symmetry".to_string(),
                "oam_a".to_string(),
                "oam_b".to_string(),
                "re".to_string(),
                "im".to_string(),
            ]];
            for r in &records {
                for a in &r.amplitudes {
                    rows.push(vec![
                        r.m.to_string(),
                        r.n.to_string(),
                        r.symmetry.to_string(),
                        a.oam_a.to_string(),
                        a.oam_b.to_string(),
                        a.re.to_string(),
                        a.im.to_string(),
                    ]);
                }
            }
            dir.write("states.csv", &csv_bytes(&rows)?)?;
        }
    }

    // Overlap matrix as CSV in both formats.
    let header: Vec<String> = std::iter::once(String::new())
        .chain(labels.iter().map(|l| l.to_string()))
        .collect();
    let mut rows = vec![header];
    for (i, li) in labels.iter().enumerate() {
        let mut row = vec![li.to_string()];
        for j in 0..labels.len() {
            row.push(format_overlap(overlaps[(i, j)], false));
        }
        rows.push(row);
    }
    dir.write("overlap.csv", &csv_bytes(&rows)?)?;

    println!(
        "basis D={dim}: {} states; census symmetric={} antisymmetric={} neither={}",
        labels.len(),
        census_counts.0,
        census_counts.1,
        census_counts.2
    );

    dir.finish(
        "basis",
        seed,
        json!({
            "dim": dim,
            "lowest_oam": space.lowest_oam(),
            "format": match format { FormatArg::Json => "json", FormatArg::Csv => "csv" },
        }),
    )
}
