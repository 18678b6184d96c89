//! Reader and writer for the UEA/UCR `.ts` text format, plus imputation.
//!
//! Layout: `@`-prefixed header tags (case-insensitive, any order), an `@data`
//! line, then one record per line. Channels are separated by `:`, values by `,`,
//! `?` marks a missing value and the last `:` field is the class label when the
//! header declares `@classLabel true ...`. Lines starting with `%` or `#` are
//! comments.

use std::fmt::Write as _;

use crate::error::{Error, ParseErrorKind, Result};
use crate::series::{LabeledDataset, LabeledItem, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesLength {
    Fixed(usize),
    Variable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TsHeader {
    pub problem_name: String,
    pub dimensions: Option<usize>,
    pub series_length: SeriesLength,
    pub has_class_labels: bool,
    pub class_label_names: Vec<String>,
    /// Every other tag, original spelling and order preserved.
    pub extra_tags: Vec<(String, String)>,
}

impl TsHeader {
    /// Header describing `ds` as it stands.
    pub fn for_dataset(ds: &LabeledDataset) -> Self {
        let series_length = match ds.common_len() {
            Some(t) => SeriesLength::Fixed(t),
            None if ds.is_empty() => SeriesLength::Unknown,
            None => SeriesLength::Variable,
        };
        let dims = ds.n_channels();
        let mut extra_tags = vec![
            ("timeStamps".to_string(), "false".to_string()),
            ("missing".to_string(), (!ds.is_fully_observed()).to_string()),
        ];
        if let Some(m) = dims {
            extra_tags.push(("univariate".to_string(), (m == 1).to_string()));
        }
        extra_tags.push((
            "equalLength".to_string(),
            (series_length != SeriesLength::Variable).to_string(),
        ));
        Self {
            problem_name: ds.name().to_string(),
            dimensions: dims,
            series_length,
            has_class_labels: true,
            class_label_names: ds.labels().to_vec(),
            extra_tags,
        }
    }

    pub fn extra_tag(&self, key: &str) -> Option<&str> {
        self.extra_tags
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v.as_str())
    }
}

/// Non-fatal parser findings.
#[derive(Clone, Debug, PartialEq)]
pub enum ParseWarning {
    UnknownTag { line: usize, tag: String },
}

#[derive(Clone, Debug)]
pub struct ParsedTs {
    pub header: TsHeader,
    pub dataset: LabeledDataset,
    pub warnings: Vec<ParseWarning>,
}

/// Tags understood without a warning but carried through `extra_tags`.
const PASSTHROUGH_TAGS: &[&str] = &["timestamps", "missing", "univariate", "equallength"];

fn perr(line: usize, column: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, column, kind }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

/// Parses a whole `.ts` document. Series ids are `<problem name>:<record index>`.
pub fn parse_ts(text: &str) -> Result<ParsedTs> {
    let mut header = TsHeader {
        problem_name: String::new(),
        dimensions: None,
        series_length: SeriesLength::Unknown,
        has_class_labels: false,
        class_label_names: Vec::new(),
        extra_tags: Vec::new(),
    };
    let mut warnings = Vec::new();
    let mut lines = text.split('\n').enumerate();
    let mut in_data = false;

    for (idx, raw) in lines.by_ref() {
        let lineno = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let Some(body) = line.strip_prefix('@') else {
            return Err(perr(lineno, 1, ParseErrorKind::MissingDataSection));
        };
        let (tag, rest) = match body.find(char::is_whitespace) {
            Some(p) => (&body[..p], body[p..].trim()),
            None => (body, ""),
        };
        let bad = |msg: String| perr(lineno, 1, ParseErrorKind::BadHeader(msg));
        match tag.to_ascii_lowercase().as_str() {
            "data" => {
                in_data = true;
                break;
            }
            "problemname" => header.problem_name = rest.to_string(),
            "dimensions" => {
                let d: usize = rest
                    .parse()
                    .map_err(|_| bad(format!("@dimensions {rest:?}")))?;
                if d == 0 {
                    return Err(bad("@dimensions must be positive".into()));
                }
                header.dimensions = Some(d);
            }
            "serieslength" => {
                let t: usize = rest
                    .parse()
                    .map_err(|_| bad(format!("@seriesLength {rest:?}")))?;
                if t == 0 {
                    return Err(bad("@seriesLength must be positive".into()));
                }
                header.series_length = SeriesLength::Fixed(t);
            }
            "classlabel" => {
                let mut parts = rest.split_whitespace();
                let flag = parts
                    .next()
                    .and_then(parse_bool)
                    .ok_or_else(|| bad(format!("@classLabel {rest:?}")))?;
                header.has_class_labels = flag;
                header.class_label_names = parts.map(str::to_string).collect();
                if flag && header.class_label_names.is_empty() {
                    return Err(bad("@classLabel true without label names".into()));
                }
            }
            other => {
                if other == "equallength" && parse_bool(rest) == Some(false) {
                    header.series_length = SeriesLength::Variable;
                }
                if !PASSTHROUGH_TAGS.contains(&other) {
                    warnings.push(ParseWarning::UnknownTag {
                        line: lineno,
                        tag: tag.to_string(),
                    });
                }
                header.extra_tags.push((tag.to_string(), rest.to_string()));
            }
        }
    }
    if !in_data {
        let last = text.split('\n').count();
        return Err(perr(last.max(1), 1, ParseErrorKind::MissingDataSection));
    }
    if !header.has_class_labels {
        return Err(perr(1, 1, ParseErrorKind::Unlabeled));
    }

    let mut ds = LabeledDataset::new(header.problem_name.clone(), header.class_label_names.clone());
    let mut dims = header.dimensions;
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let series_idx = ds.len();
        let (series, label) = parse_record(
            line,
            lineno,
            &header.class_label_names,
            &mut dims,
            format!("{}:{series_idx}", header.problem_name),
        )?;
        ds.push(series, label)
            .map_err(|e| perr(lineno, 1, ParseErrorKind::BadHeader(e.to_string())))?;
    }
    header.dimensions = dims;
    Ok(ParsedTs {
        header,
        dataset: ds,
        warnings,
    })
}

fn parse_record(
    line: &str,
    lineno: usize,
    labels: &[String],
    dims: &mut Option<usize>,
    id: String,
) -> Result<(Series, usize)> {
    // Field boundaries as (start byte offset, text).
    let mut fields: Vec<(usize, &str)> = Vec::new();
    let mut start = 0;
    for (i, c) in line.char_indices() {
        if c == ':' {
            fields.push((start, &line[start..i]));
            start = i + 1;
        }
    }
    fields.push((start, &line[start..]));
    let col = |byte: usize| line[..byte].chars().count() + 1;

    let (label_off, label_text) = fields.pop().expect("split yields one field");
    if fields.is_empty() {
        return Err(perr(lineno, col(label_off), ParseErrorKind::MissingLabel));
    }
    let label_text = label_text.trim();
    let label = labels
        .iter()
        .position(|l| l == label_text)
        .ok_or_else(|| {
            perr(
                lineno,
                col(label_off),
                ParseErrorKind::UnknownLabel(label_text.to_string()),
            )
        })?;

    let expected = *dims.get_or_insert(fields.len());
    if fields.len() != expected {
        return Err(perr(
            lineno,
            1,
            ParseErrorKind::RaggedRecord {
                expected,
                found: fields.len(),
            },
        ));
    }

    let mut rows = Vec::with_capacity(fields.len());
    let mut mask = Vec::with_capacity(fields.len());
    for &(off, field) in &fields {
        let mut row = Vec::new();
        let mut m = Vec::new();
        let mut vstart = off;
        for tok in field.split(',') {
            let t = tok.trim();
            if t == "?" || t.eq_ignore_ascii_case("nan") {
                row.push(f64::NAN);
                m.push(false);
            } else {
                let v: f64 = t.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                    let lead = tok.len() - tok.trim_start().len();
                    perr(
                        lineno,
                        col(vstart + lead),
                        ParseErrorKind::NonNumericValue(t.to_string()),
                    )
                })?;
                row.push(v);
                m.push(true);
            }
            vstart += tok.len() + 1;
        }
        if let Some(first) = rows.first().map(|r: &Vec<f64>| r.len()) {
            if row.len() != first {
                return Err(perr(lineno, col(off), ParseErrorKind::RaggedChannels(first, row.len())));
            }
        }
        rows.push(row);
        mask.push(m);
    }
    let series = Series::with_mask(id, rows, mask)
        .map_err(|e| perr(lineno, 1, ParseErrorKind::BadHeader(e.to_string())))?;
    Ok((series, label))
}

/// Renders `ds` as a `.ts` document (LF line endings).
///
/// Values use the shortest representation that parses back to the same `f64`.
pub fn write_ts(header: &TsHeader, ds: &LabeledDataset) -> Result<String> {
    if !header.has_class_labels {
        return Err(Error::InconsistentHeader("writer requires class labels".into()));
    }
    if header.class_label_names != ds.labels() {
        return Err(Error::InconsistentHeader(format!(
            "header labels {:?} differ from dataset labels {:?}",
            header.class_label_names,
            ds.labels()
        )));
    }
    if let (Some(d), Some(m)) = (header.dimensions, ds.n_channels()) {
        if d != m {
            return Err(Error::InconsistentHeader(format!(
                "header declares {d} dimensions, dataset has {m}"
            )));
        }
    }
    if let SeriesLength::Fixed(t) = header.series_length {
        if let Some(bad) = ds.items().iter().find(|i| i.series.len() != t) {
            return Err(Error::InconsistentHeader(format!(
                "series {:?} has length {}, header declares {t}",
                bad.series.id(),
                bad.series.len()
            )));
        }
    }
    if let Some(l) = header
        .class_label_names
        .iter()
        .find(|l| l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == ':'))
    {
        return Err(Error::InconsistentHeader(format!("label {l:?} cannot be written")));
    }

    let mut out = String::new();
    writeln!(out, "@problemName {}", header.problem_name).unwrap();
    for (k, v) in &header.extra_tags {
        if v.is_empty() {
            writeln!(out, "@{k}").unwrap();
        } else {
            writeln!(out, "@{k} {v}").unwrap();
        }
    }
    if let Some(d) = header.dimensions {
        writeln!(out, "@dimensions {d}").unwrap();
    }
    if let SeriesLength::Fixed(t) = header.series_length {
        writeln!(out, "@seriesLength {t}").unwrap();
    }
    writeln!(out, "@classLabel true {}", header.class_label_names.join(" ")).unwrap();
    out.push_str("@data\n");
    for item in ds.items() {
        write_record(&mut out, item, &header.class_label_names);
    }
    Ok(out)
}

fn write_record(out: &mut String, item: &LabeledItem, labels: &[String]) {
    let s = &item.series;
    for j in 0..s.n_channels() {
        for t in 0..s.len() {
            if t > 0 {
                out.push(',');
            }
            match s.get(j, t) {
                Some(v) => write!(out, "{v:?}").unwrap(),
                None => out.push('?'),
            }
        }
        out.push(':');
    }
    out.push_str(&labels[item.label]);
    out.push('\n');
}

/// How missing values are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FillMethod {
    #[default]
    LinearInterpolate,
    ForwardFill,
    ZeroFill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PadValue {
    #[default]
    Edge,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PadTo {
    #[default]
    MaxLength,
    /// Target length; longer series are an error unless `truncate` is set.
    Fixed { len: usize, truncate: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ImputePolicy {
    pub method: FillMethod,
    pub pad_to: PadTo,
    pub pad_value: PadValue,
}

/// Fills every missing entry and brings all series to one length.
pub fn impute(ds: &LabeledDataset, policy: &ImputePolicy) -> Result<LabeledDataset> {
    let target = match policy.pad_to {
        PadTo::MaxLength => ds.max_len(),
        PadTo::Fixed { len, truncate } => {
            if len == 0 {
                return Err(Error::ImputePolicy("fixed length must be positive".into()));
            }
            if !truncate && ds.max_len() > len {
                return Err(Error::ImputePolicy(format!(
                    "longest series has {} steps, target {len} and truncation disabled",
                    ds.max_len()
                )));
            }
            len
        }
    };
    let mut items = Vec::with_capacity(ds.len());
    for (i, item) in ds.items().iter().enumerate() {
        let s = &item.series;
        let mut rows = Vec::with_capacity(s.n_channels());
        for j in 0..s.n_channels() {
            let filled = fill_channel(s.channel(j), s.channel_mask(j), policy.method)
                .ok_or(Error::AllMissingChannel { series: i, channel: j })?;
            rows.push(pad_channel(filled, target, policy.pad_value));
        }
        let series = Series::from_channels(s.id(), rows)?;
        items.push(LabeledItem {
            series,
            label: item.label,
            origin: item.origin.clone(),
        });
    }
    Ok(ds.replace_items(items))
}

fn fill_channel(values: &[f64], mask: &[bool], method: FillMethod) -> Option<Vec<f64>> {
    let observed: Vec<usize> = (0..values.len()).filter(|&t| mask[t]).collect();
    let first = *observed.first()?;
    let last = *observed.last()?;
    let mut out = values.to_vec();
    match method {
        FillMethod::ZeroFill => {
            for (v, &o) in out.iter_mut().zip(mask) {
                if !o {
                    *v = 0.0;
                }
            }
        }
        FillMethod::ForwardFill => {
            let mut prev = values[first];
            for t in 0..out.len() {
                if mask[t] {
                    prev = values[t];
                } else {
                    out[t] = prev;
                }
            }
        }
        FillMethod::LinearInterpolate => {
            for v in out.iter_mut().take(first) {
                *v = values[first];
            }
            for v in out.iter_mut().skip(last + 1) {
                *v = values[last];
            }
            for w in observed.windows(2) {
                let (a, b) = (w[0], w[1]);
                let span = (b - a) as f64;
                for (t, v) in out.iter_mut().enumerate().take(b).skip(a + 1) {
                    let frac = (t - a) as f64 / span;
                    *v = values[a] + frac * (values[b] - values[a]);
                }
            }
        }
    }
    Some(out)
}

fn pad_channel(mut row: Vec<f64>, target: usize, pad: PadValue) -> Vec<f64> {
    if row.len() >= target {
        row.truncate(target);
        return row;
    }
    let fill = match pad {
        PadValue::Edge => *row.last().expect("non-empty row"),
        PadValue::Zero => 0.0,
    };
    row.resize(target, fill);
    row
}
