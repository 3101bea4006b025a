use std::f64::consts::PI;
use std::path::Path;

use crate::decay::{DecayChannel, DecayParameters, GammaSign};
use crate::{Error, Result};

use super::report::{Cell, Report};

/// Column order of a parameter file.
pub const PARAMETER_HEADER: [&str; 9] = [
    "parent",
    "quarks",
    "channel",
    "branching",
    "alpha",
    "phi_pi",
    "gamma_sign",
    "deduced",
    "source",
];

/// Parameter file shipped with the crate.
pub const BUNDLED_PARAMETERS: &str = include_str!("../../data/hyperon_parameters.csv");

/// One decay mode as stored on disk, plus its derived parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterRow {
    pub parent: String,
    pub quarks: String,
    pub channel: String,
    pub branching: f64,
    pub alpha: f64,
    /// `φ / π`.
    pub phi_pi: f64,
    pub gamma_sign: GammaSign,
    /// `φ` inferred from other modes rather than measured.
    pub deduced: bool,
    pub source: String,
    pub params: DecayParameters,
}

impl ParameterRow {
    pub fn name(&self) -> String {
        format!("{} -> {}", self.parent, self.channel)
    }

    pub fn decay_channel(&self) -> DecayChannel {
        DecayChannel {
            parent: self.parent.clone(),
            daughters: self.channel.clone(),
            spin: crate::decay::Spin::HALF,
            branching: self.branching,
            params: self.params,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParameterTable {
    pub rows: Vec<ParameterRow>,
    /// Non-fatal findings such as an empty file.
    pub warnings: Vec<String>,
}

impl ParameterTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Looks a row up by `"parent"` (first mode of that parent) or by
    /// `"parent -> channel"`; both compare case-insensitively and ignore spaces.
    pub fn find(&self, key: &str) -> Result<&ParameterRow> {
        let squash = |s: &str| {
            s.chars()
                .filter(|c| !c.is_whitespace())
                .collect::<String>()
                .to_lowercase()
        };
        let want = squash(key);
        let hit = if want.contains("->") {
            self.rows.iter().find(|r| squash(&r.name()) == want)
        } else {
            self.rows.iter().find(|r| squash(&r.parent) == want)
        };
        hit.ok_or_else(|| Error::UnknownChannel(key.to_string()))
    }
}

/// Published `(χ_SP / π, V, P)` with their uncertainties, as `(value, error)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub parent: &'static str,
    pub channel: &'static str,
    pub chi_sp_pi: (f64, f64),
    pub visibility: (f64, f64),
    pub predictability: (f64, f64),
}

pub const REFERENCE_VALUES: [ReferenceRow; 8] = [
    ReferenceRow {
        parent: "Lambda",
        channel: "p pi-",
        chi_sp_pi: (-0.043, 0.023),
        visibility: (0.648, 0.014),
        predictability: (0.762, 0.012),
    },
    ReferenceRow {
        parent: "Lambda",
        channel: "n pi0",
        chi_sp_pi: (-0.042, 0.023),
        visibility: (0.656, 0.040),
        predictability: (0.755, 0.034),
    },
    ReferenceRow {
        parent: "Lambdabar",
        channel: "pbar pi+",
        chi_sp_pi: (0.036, 0.021),
        visibility: (0.714, 0.079),
        predictability: (0.700, 0.080),
    },
    ReferenceRow {
        parent: "Sigma-",
        channel: "n pi-",
        chi_sp_pi: (-0.38, 0.16),
        visibility: (0.19, 0.24),
        predictability: (0.98, 0.05),
    },
    ReferenceRow {
        parent: "Sigma+",
        channel: "p pi0",
        chi_sp_pi: (-0.038, 0.035),
        visibility: (0.976, 0.016),
        predictability: (0.161, 0.097),
    },
    ReferenceRow {
        parent: "Sigma+",
        channel: "n pi+",
        chi_sp_pi: (0.41, 0.13),
        visibility: (0.24, 0.33),
        predictability: (0.972, 0.078),
    },
    ReferenceRow {
        parent: "Xi0",
        channel: "Lambda pi0",
        chi_sp_pi: (0.214, 0.085),
        visibility: (0.53, 0.11),
        predictability: (0.85, 0.07),
    },
    ReferenceRow {
        parent: "Xi-",
        channel: "Lambda pi-",
        chi_sp_pi: (0.0226, 0.0086),
        visibility: (0.459, 0.012),
        predictability: (0.8884, 0.0062),
    },
];

pub fn bundled_parameters() -> ParameterTable {
    parse_parameters(BUNDLED_PARAMETERS, "<bundled>").expect("bundled parameter file is valid")
}

pub fn load_parameters(path: impl AsRef<Path>) -> Result<ParameterTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })?;
    parse_parameters(&text, &path.display().to_string())
}

/// Parses parameter-file text. `label` names the source in errors.
///
/// Syntax problems are reported by line and column (column = 1-based field
/// index); rows that parse but violate an invariant by data row and field.
pub fn parse_parameters(text: &str, label: &str) -> Result<ParameterTable> {
    let mut table = ParameterTable::default();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: u64, column: usize, message: String| Error::Parse {
        path: label.to_string(),
        line,
        column,
        message,
    };

    let mut header_seen = false;
    let mut row_no = 0u64;
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, 1, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if !header_seen {
            for (i, want) in PARAMETER_HEADER.iter().enumerate() {
                match rec.get(i) {
                    Some(got) if got == *want => {}
                    got => {
                        return Err(parse_err(
                            line,
                            i + 1,
                            format!("expected header `{want}`, found `{}`", got.unwrap_or("")),
                        ))
                    }
                }
            }
            if rec.len() != PARAMETER_HEADER.len() {
                return Err(parse_err(line, PARAMETER_HEADER.len() + 1, "extra header column".into()));
            }
            header_seen = true;
            continue;
        }
        if rec.len() != PARAMETER_HEADER.len() {
            return Err(parse_err(
                line,
                rec.len().min(PARAMETER_HEADER.len()) + 1,
                format!("expected {} fields, found {}", PARAMETER_HEADER.len(), rec.len()),
            ));
        }
        row_no += 1;
        let number = |i: usize| -> Result<f64> {
            let raw = &rec[i];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, i + 1, format!("`{raw}` is not a finite number")))
        };
        let invalid = |field: &'static str, message: String| Error::Invalid {
            path: label.to_string(),
            row: row_no,
            field,
            message,
        };

        let branching = number(3)?;
        let alpha = number(4)?;
        let phi_pi = number(5)?;
        let gamma_sign = match &rec[6] {
            "+1" | "1" | "+" => GammaSign::Positive,
            "-1" | "-" => GammaSign::Negative,
            other => return Err(parse_err(line, 7, format!("gamma_sign `{other}` is not +1 or -1"))),
        };
        let deduced = match rec[7].to_ascii_lowercase().as_str() {
            "true" | "yes" | "*" => true,
            "false" | "no" | "" => false,
            other => return Err(parse_err(line, 8, format!("deduced `{other}` is not a boolean"))),
        };
        for (i, field) in [(0, "parent"), (2, "channel")] {
            if rec[i].is_empty() {
                return Err(invalid(field, "must not be empty".into()));
            }
        }
        if !(0.0..=1.0).contains(&branching) {
            return Err(invalid("branching", format!("{branching} is outside [0, 1]")));
        }
        if alpha.abs() > 1.0 {
            return Err(invalid("alpha", format!("|{alpha}| exceeds 1")));
        }
        let params = DecayParameters::from_alpha_phi(alpha, phi_pi * PI, gamma_sign)
            .map_err(|e| invalid("gamma_sign", e.to_string()))?;
        table.rows.push(ParameterRow {
            parent: rec[0].to_string(),
            quarks: rec[1].to_string(),
            channel: rec[2].to_string(),
            branching,
            alpha,
            phi_pi,
            gamma_sign,
            deduced,
            source: rec[8].to_string(),
            params,
        });
    }
    if table.rows.is_empty() {
        table.warnings.push(format!("{label}: no parameter rows"));
    }
    Ok(table)
}

/// Recomputed phase, visibility and predictability, one row per input row.
pub fn emit_table(table: &ParameterTable) -> Report {
    let mut report = Report::new(&[
        "parent",
        "quarks",
        "channel",
        "branching",
        "alpha",
        "chi_sp_pi",
        "visibility",
        "predictability",
        "deduced",
    ]);
    for r in &table.rows {
        report.push(vec![
            Cell::text(&r.parent),
            Cell::text(&r.quarks),
            Cell::text(&r.channel),
            Cell::Num(r.branching),
            Cell::Num(r.alpha),
            Cell::Num(r.params.table_phase() / PI),
            Cell::Num(r.params.visibility),
            Cell::Num(r.params.predictability),
            Cell::Bool(r.deduced),
        ]);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "parent,quarks,channel,branching,alpha,phi_pi,gamma_sign,deduced,source\n";

    #[test]
    fn bundled_rows() {
        let t = bundled_parameters();
        assert_eq!(t.len(), 8);
        assert!(t.warnings.is_empty());
        for (row, reference) in t.rows.iter().zip(REFERENCE_VALUES.iter()) {
            assert_eq!(row.parent, reference.parent);
            assert_eq!(row.channel, reference.channel);
        }
    }

    #[test]
    fn bundled_within_published_errors() {
        for (row, r) in bundled_parameters().rows.iter().zip(REFERENCE_VALUES.iter()) {
            let p = &row.params;
            let within = |x: f64, (v, e): (f64, f64)| (x - v).abs() <= e;
            assert!(within(p.table_phase() / PI, r.chi_sp_pi), "{}", row.name());
            assert!(within(p.visibility, r.visibility), "{}", row.name());
            assert!(within(p.predictability, r.predictability), "{}", row.name());
        }
    }

    #[test]
    fn lambda_row() {
        let t = bundled_parameters();
        let p = t.find("Lambda -> p pi-").unwrap().params;
        assert!((p.visibility - 0.648).abs() < 0.014);
        assert!((p.predictability - 0.762).abs() < 0.012);
        assert!((p.table_phase() / PI + 0.043).abs() < 0.023);
    }

    #[test]
    fn find_by_parent_and_channel() {
        let t = bundled_parameters();
        assert_eq!(t.find("sigma+").unwrap().channel, "p pi0");
        assert_eq!(t.find("Sigma+ -> n pi+").unwrap().channel, "n pi+");
        assert!(matches!(t.find("Omega-"), Err(Error::UnknownChannel(_))));
    }

    #[test]
    fn alpha_too_large_rejected() {
        let text = format!("{HEADER}X,uds,a b,0.5,1.2,0,+1,false,test\n");
        match parse_parameters(&text, "t") {
            Err(Error::Invalid { row, field, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(field, "alpha");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn branching_out_of_range() {
        let text = format!("{HEADER}X,uds,a b,1.5,0.2,0,+1,false,t\n");
        assert!(matches!(
            parse_parameters(&text, "t"),
            Err(Error::Invalid { field: "branching", .. })
        ));
    }

    #[test]
    fn gamma_sign_contradiction() {
        let text = format!("{HEADER}X,uds,a b,0.5,0.2,0,-1,false,t\n");
        assert!(matches!(
            parse_parameters(&text, "t"),
            Err(Error::Invalid { field: "gamma_sign", .. })
        ));
    }

    #[test]
    fn bad_number_located() {
        let text = format!("# c\n{HEADER}X,uds,a b,0.5,0.2,zero,+1,false,t\n");
        match parse_parameters(&text, "t") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_row_located() {
        let text = format!("{HEADER}X,uds,a b,0.5\n");
        assert!(matches!(parse_parameters(&text, "t"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn wrong_header() {
        let text = "parent,quark,channel\n";
        assert!(matches!(
            parse_parameters(text, "t"),
            Err(Error::Parse { line: 1, column: 2, .. })
        ));
    }

    #[test]
    fn empty_file_warns() {
        for text in ["", "# only a comment\n", HEADER] {
            let t = parse_parameters(text, "t").unwrap();
            assert!(t.is_empty());
            assert_eq!(t.warnings.len(), 1);
        }
    }

    #[test]
    fn zero_alpha_limit() {
        let text = format!("{HEADER}X,uds,a b,0.5,0,0.3,+1,false,t\n");
        let t = parse_parameters(&text, "t").unwrap();
        let p = t.rows[0].params;
        let phi = 0.3 * PI;
        assert!((p.visibility - phi.sin().abs()).abs() < 1e-12);
        assert!((p.predictability - phi.cos().abs()).abs() < 1e-12);
    }

    #[test]
    fn emitted_table_shape() {
        let report = emit_table(&bundled_parameters());
        assert_eq!(report.rows().len(), 8);
        let csv = report.to_csv();
        assert!(csv.starts_with("parent,quarks,channel,branching,alpha,chi_sp_pi,visibility,predictability,deduced\n"));
        assert!(csv.contains("Lambda,uds,p pi-,0.639000,0.642000,-0.0427"));
    }
}
