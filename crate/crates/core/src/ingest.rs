//! Raw dataset parsing into a canonical interaction log.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CANONICAL_HEADER: &str = "user_id,item_id,rating,timestamp";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// MovieLens 100K `u.data`: tab-separated user, item, rating, timestamp.
    Ml100kTsv,
    /// MovieLens 1M/10M `ratings.dat`: `::`-separated.
    MlDat,
    /// Amazon ratings dump: comma-separated, configurable column order, optional header.
    AmazonCsv,
    /// The toolkit's own CSV output (`user_id,item_id,rating,timestamp`).
    Canonical,
}

impl Format {
    pub fn default_scale(self) -> RatingScale {
        match self {
            Format::Ml100kTsv | Format::AmazonCsv => RatingScale::new(1.0, 5.0, Some(1.0)),
            Format::MlDat => RatingScale::new(0.5, 5.0, Some(0.5)),
            Format::Canonical => RatingScale::new(0.5, 5.0, None),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Ml100kTsv => "ml100k_tsv",
            Format::MlDat => "ml_dat",
            Format::AmazonCsv => "amazon_csv",
            Format::Canonical => "canonical",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ml100k_tsv" => Ok(Format::Ml100kTsv),
            "ml_dat" => Ok(Format::MlDat),
            "amazon_csv" => Ok(Format::AmazonCsv),
            "canonical" | "csv" => Ok(Format::Canonical),
            other => Err(Error::invalid(format!(
                "unknown format '{other}' (expected ml100k_tsv, ml_dat, amazon_csv or canonical)"
            ))),
        }
    }
}

/// Declared rating bounds of a dataset. `step` is descriptive only; averaged
/// duplicates legitimately fall between steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatingScale {
    pub min: f64,
    pub max: f64,
    pub step: Option<f64>,
}

impl RatingScale {
    pub fn new(min: f64, max: f64, step: Option<f64>) -> Self {
        Self { min, max, step }
    }

    pub fn contains(&self, rating: f64) -> bool {
        rating >= self.min && rating <= self.max
    }
}

impl FromStr for RatingScale {
    type Err = Error;

    /// `min:max` or `min:max:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad rating scale '{s}'")))
        };
        let scale = match parts.as_slice() {
            [lo, hi] => RatingScale::new(num(lo)?, num(hi)?, None),
            [lo, hi, st] => RatingScale::new(num(lo)?, num(hi)?, Some(num(st)?)),
            _ => return Err(Error::invalid(format!("bad rating scale '{s}' (want min:max[:step])"))),
        };
        if !(scale.min <= scale.max) {
            return Err(Error::invalid(format!("rating scale min exceeds max in '{s}'")));
        }
        Ok(scale)
    }
}

/// Positions of the four logical columns within a delimited row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnOrder {
    pub user: usize,
    pub item: usize,
    pub rating: usize,
    pub timestamp: Option<usize>,
}

impl Default for ColumnOrder {
    fn default() -> Self {
        ColumnOrder {
            user: 0,
            item: 1,
            rating: 2,
            timestamp: Some(3),
        }
    }
}

impl ColumnOrder {
    fn width(&self) -> usize {
        [Some(self.user), Some(self.item), Some(self.rating), self.timestamp]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0)
            + 1
    }
}

impl FromStr for ColumnOrder {
    type Err = Error;

    /// A comma-separated list of column names in file order, e.g.
    /// `item,user,rating,timestamp`. Unknown names (e.g. `_`) are skipped columns.
    fn from_str(s: &str) -> Result<Self> {
        let (mut user, mut item, mut rating, mut timestamp) = (None, None, None, None);
        for (pos, name) in s.split(',').map(str::trim).enumerate() {
            let slot = match name {
                "user" | "user_id" => &mut user,
                "item" | "item_id" => &mut item,
                "rating" => &mut rating,
                "timestamp" | "ts" => &mut timestamp,
                _ => continue,
            };
            if slot.replace(pos).is_some() {
                return Err(Error::invalid(format!("column '{name}' repeated in '{s}'")));
            }
        }
        match (user, item, rating) {
            (Some(user), Some(item), Some(rating)) => Ok(ColumnOrder {
                user,
                item,
                rating,
                timestamp,
            }),
            _ => Err(Error::invalid(format!(
                "column order '{s}' must name user, item and rating"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub column_order: Option<ColumnOrder>,
    pub scale: Option<RatingScale>,
}

/// One rating event, with users and items as dense dataset indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub user: u32,
    pub item: u32,
    pub rating: f64,
    pub timestamp: Option<i64>,
}

/// Bijection between external identifiers and dense indices in
/// first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdIndex {
    ids: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl IdIndex {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<u32> {
        self.lookup.get(id).copied()
    }

    pub fn id(&self, index: u32) -> &str {
        &self.ids[index as usize]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    fn intern(&mut self, id: &str) -> u32 {
        if let Some(&ix) = self.lookup.get(id) {
            return ix;
        }
        let ix = self.ids.len() as u32;
        self.ids.push(id.to_owned());
        self.lookup.insert(id.to_owned(), ix);
        ix
    }
}

/// Immutable interaction log with dense user/item index maps.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionDataset {
    interactions: Vec<Interaction>,
    users: IdIndex,
    items: IdIndex,
    scale: RatingScale,
}

/// Accumulates rows keyed by external ids.
#[derive(Debug)]
pub struct DatasetBuilder {
    interactions: Vec<Interaction>,
    users: IdIndex,
    items: IdIndex,
    scale: RatingScale,
}

impl DatasetBuilder {
    pub fn new(scale: RatingScale) -> Self {
        Self {
            interactions: Vec::new(),
            users: IdIndex::default(),
            items: IdIndex::default(),
            scale,
        }
    }

    pub fn push(&mut self, user: &str, item: &str, rating: f64, timestamp: Option<i64>) -> Result<()> {
        if !rating.is_finite() || !self.scale.contains(rating) {
            return Err(Error::invalid(format!(
                "rating {rating} outside scale [{}, {}]",
                self.scale.min, self.scale.max
            )));
        }
        if let Some(ts) = timestamp {
            if ts < 0 {
                return Err(Error::invalid(format!("negative timestamp {ts}")));
            }
        }
        let user = self.users.intern(user);
        let item = self.items.intern(item);
        self.interactions.push(Interaction {
            user,
            item,
            rating,
            timestamp,
        });
        Ok(())
    }

    pub fn build(self) -> InteractionDataset {
        InteractionDataset {
            interactions: self.interactions,
            users: self.users,
            items: self.items,
            scale: self.scale,
        }
    }
}

impl InteractionDataset {
    pub fn empty(scale: RatingScale) -> Self {
        DatasetBuilder::new(scale).build()
    }

    /// Builds a dataset from `(user, item, rating, timestamp)` rows with external ids.
    pub fn from_rows<'a, I>(scale: RatingScale, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64, Option<i64>)>,
    {
        let mut b = DatasetBuilder::new(scale);
        for (u, i, r, t) in rows {
            b.push(u, i, r, t)?;
        }
        Ok(b.build())
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn users(&self) -> &IdIndex {
        &self.users
    }

    pub fn items(&self) -> &IdIndex {
        &self.items
    }

    pub fn scale(&self) -> RatingScale {
        self.scale
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn len(&self) -> usize {
        self.interactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interactions.is_empty()
    }

    /// New dataset over the given interactions (indices referring to `self`),
    /// with index maps rebuilt densely in first-appearance order.
    pub fn reindexed<I>(&self, rows: I) -> InteractionDataset
    where
        I: IntoIterator<Item = Interaction>,
    {
        let mut b = DatasetBuilder::new(self.scale);
        for it in rows {
            let user = b.users.intern(self.users.id(it.user));
            let item = b.items.intern(self.items.id(it.item));
            b.interactions.push(Interaction { user, item, ..it });
        }
        b.build()
    }

    pub fn write_canonical<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CANONICAL_HEADER}")?;
        for it in &self.interactions {
            write!(
                out,
                "{},{},{},",
                csv_field(self.users.id(it.user)),
                csv_field(self.items.id(it.item)),
                it.rating
            )?;
            if let Some(ts) = it.timestamp {
                write!(out, "{ts}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save_canonical(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_canonical(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    /// SHA-256 (hex) of the canonical CSV rendering.
    pub fn fingerprint(&self) -> String {
        let mut hasher = HashWriter(Sha256::new());
        self.write_canonical(&mut hasher)
            .expect("hashing never fails");
        hex::encode(hasher.0.finalize())
    }
}

struct HashWriter(Sha256);

impl Write for HashWriter {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.update(buf);
        Ok(buf.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

fn csv_field(s: &str) -> std::borrow::Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\"")).into()
    } else {
        s.into()
    }
}

/// Headline counts of a dataset, as reported in dataset tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub n_users: usize,
    pub n_items: usize,
    pub n_interactions: usize,
    pub avg_int_per_user: usize,
    pub avg_int_per_item: usize,
}

impl fmt::Display for StatsRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "users={} items={} interactions={} avg/user={} avg/item={}",
            self.n_users, self.n_items, self.n_interactions, self.avg_int_per_user, self.avg_int_per_item
        )
    }
}

/// Counts and whole-number averages. Averages are truncated toward zero,
/// which is how the published dataset tables report them.
pub fn dataset_stats(ds: &InteractionDataset) -> Result<StatsRow> {
    if ds.is_empty() {
        return Err(Error::invalid("cannot summarize an empty dataset"));
    }
    let n = ds.len();
    Ok(StatsRow {
        n_users: ds.n_users(),
        n_items: ds.n_items(),
        n_interactions: n,
        avg_int_per_user: n / ds.n_users(),
        avg_int_per_item: n / ds.n_items(),
    })
}

pub fn parse_interactions(path: &Path, format: Format, opts: &ParseOptions) -> Result<InteractionDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_reader(BufReader::new(file), path, format, opts)
}

/// Parses from any reader; `origin` is only used in error messages.
pub fn parse_reader<R: BufRead>(
    reader: R,
    origin: &Path,
    format: Format,
    opts: &ParseOptions,
) -> Result<InteractionDataset> {
    let scale = opts.scale.unwrap_or_else(|| format.default_scale());
    let mut builder = DatasetBuilder::new(scale);
    match format {
        Format::Ml100kTsv => parse_delimited(reader, origin, "\t", opts, &mut builder)?,
        Format::MlDat => parse_delimited(reader, origin, "::", opts, &mut builder)?,
        Format::AmazonCsv | Format::Canonical => parse_csv(reader, origin, format, opts, &mut builder)?,
    }
    Ok(builder.build())
}

fn parse_delimited<R: BufRead>(
    reader: R,
    origin: &Path,
    sep: &str,
    opts: &ParseOptions,
    builder: &mut DatasetBuilder,
) -> Result<()> {
    let order = opts.column_order.unwrap_or_default();
    let width = order.width();
    let mut reader = reader;
    let mut buf = String::new();
    let mut lineno = 0;
    loop {
        buf.clear();
        if reader.read_line(&mut buf).map_err(|e| Error::io(origin, e))? == 0 {
            break;
        }
        lineno += 1;
        let line = buf.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(sep).collect();
        if fields.len() != width {
            return Err(parse_err(
                origin,
                lineno,
                format!("expected {width} fields, found {}", fields.len()),
            ));
        }
        push_row(&fields, &order, origin, lineno, builder)?;
    }
    Ok(())
}

fn parse_csv<R: BufRead>(
    reader: R,
    origin: &Path,
    format: Format,
    opts: &ParseOptions,
    builder: &mut DatasetBuilder,
) -> Result<()> {
    let order = match format {
        Format::Canonical => ColumnOrder::default(),
        _ => opts.column_order.unwrap_or_default(),
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut record = csv::StringRecord::new();
    let mut first = true;
    loop {
        let more = rdr.read_record(&mut record).map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(origin, line, e.to_string())
        })?;
        if !more {
            break;
        }
        let lineno = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = record.iter().collect();
        if first {
            first = false;
            if is_header(&fields, &order, format) {
                continue;
            }
        }
        // canonical rows may leave the trailing timestamp blank
        let expected = match format {
            Format::Canonical => 4,
            _ => order.width(),
        };
        if fields.len() != expected {
            return Err(parse_err(
                origin,
                lineno,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        push_row(&fields, &order, origin, lineno, builder)?;
    }
    Ok(())
}

fn is_header(fields: &[&str], order: &ColumnOrder, format: Format) -> bool {
    if format == Format::Canonical {
        return fields.join(",") == CANONICAL_HEADER;
    }
    fields
        .get(order.rating)
        .is_some_and(|r| r.trim().parse::<f64>().is_err())
}

fn push_row(
    fields: &[&str],
    order: &ColumnOrder,
    origin: &Path,
    lineno: usize,
    builder: &mut DatasetBuilder,
) -> Result<()> {
    let user = fields[order.user].trim();
    let item = fields[order.item].trim();
    if user.is_empty() || item.is_empty() {
        return Err(parse_err(origin, lineno, "empty user or item id"));
    }
    let raw_rating = fields[order.rating].trim();
    let rating: f64 = raw_rating
        .parse()
        .map_err(|_| parse_err(origin, lineno, format!("non-numeric rating '{raw_rating}'")))?;
    let timestamp = match order.timestamp.map(|c| fields[c].trim()) {
        None | Some("") => None,
        Some(raw) => Some(parse_timestamp(raw).ok_or_else(|| {
            parse_err(origin, lineno, format!("bad timestamp '{raw}'"))
        })?),
    };
    builder
        .push(user, item, rating, timestamp)
        .map_err(|e| match e {
            Error::Invalid(msg) => parse_err(origin, lineno, msg),
            other => other,
        })
}

fn parse_timestamp(raw: &str) -> Option<i64> {
    raw.parse::<i64>().ok().or_else(|| {
        // some dumps write epoch seconds as floats ("881250949.0")
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15)
            .map(|v| v as i64)
    })
}

fn parse_err(origin: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        line,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(text: &str, format: Format, opts: &ParseOptions) -> Result<InteractionDataset> {
        parse_reader(text.as_bytes(), Path::new("<mem>"), format, opts)
    }

    #[test]
    fn ml100k_row_maps_fields() {
        let ds = parse_str("196\t242\t3\t881250949\n", Format::Ml100kTsv, &ParseOptions::default()).unwrap();
        assert_eq!(ds.len(), 1);
        let it = ds.interactions()[0];
        assert_eq!(ds.users().id(it.user), "196");
        assert_eq!(ds.items().id(it.item), "242");
        assert_eq!(it.rating, 3.0);
        assert_eq!(it.timestamp, Some(881250949));
    }

    #[test]
    fn ml_dat_row_maps_fields() {
        let ds = parse_str("1::1193::5::978300760\n", Format::MlDat, &ParseOptions::default()).unwrap();
        let it = ds.interactions()[0];
        assert_eq!(ds.users().id(it.user), "1");
        assert_eq!(ds.items().id(it.item), "1193");
        assert_eq!(it.rating, 5.0);
        assert_eq!(it.timestamp, Some(978300760));
    }

    #[test]
    fn ml_dat_accepts_half_stars() {
        let ds = parse_str("5::10::3.5::1\n", Format::MlDat, &ParseOptions::default()).unwrap();
        assert_eq!(ds.interactions()[0].rating, 3.5);
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        let ds = parse_str("", Format::Ml100kTsv, &ParseOptions::default()).unwrap();
        assert!(ds.is_empty());
        assert_eq!(ds.n_users(), 0);
        assert_eq!(ds.n_items(), 0);
        assert!(dataset_stats(&ds).is_err());
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let err = parse_str("1\t2\t3\t4\n1\t2\t3\n", Format::Ml100kTsv, &ParseOptions::default()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_str("1::2::x::4\n", Format::MlDat, &ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, ref message, .. } if message.contains("non-numeric")));
    }

    #[test]
    fn out_of_scale_rating_is_rejected() {
        let err = parse_str("1\t2\t6\t4\n", Format::Ml100kTsv, &ParseOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_str("1\t2\t3\t-4\n", Format::Ml100kTsv, &ParseOptions::default()).unwrap_err();
        assert!(err.to_string().contains("negative timestamp"));
    }

    #[test]
    fn first_appearance_indexing() {
        let ds = parse_str("9\ta\t1\t0\n3\tb\t2\t0\n9\tc\t3\t0\n", Format::Ml100kTsv, &ParseOptions::default())
            .unwrap();
        assert_eq!(ds.users().ids(), &["9".to_string(), "3".to_string()]);
        assert_eq!(ds.users().get("3"), Some(1));
        let users: Vec<u32> = ds.interactions().iter().map(|it| it.user).collect();
        assert_eq!(users, vec![0, 1, 0]);
        assert_eq!(ds.n_items(), 3);
    }

    #[test]
    fn amazon_csv_header_and_column_order() {
        let text = "item,user,rating,timestamp\nB001,A9,5.0,1234\nB002,A9,4.0,1235\n";
        let opts = ParseOptions {
            column_order: Some("item,user,rating,timestamp".parse().unwrap()),
            ..Default::default()
        };
        let ds = parse_str(text, Format::AmazonCsv, &opts).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.n_users(), 1);
        assert_eq!(ds.users().id(0), "A9");
        assert_eq!(ds.items().ids(), &["B001".to_string(), "B002".to_string()]);

        // default order, no header, no timestamp column
        let opts = ParseOptions {
            column_order: Some("user,item,rating".parse().unwrap()),
            ..Default::default()
        };
        let ds = parse_str("A1,B1,3\n", Format::AmazonCsv, &opts).unwrap();
        assert_eq!(ds.interactions()[0].timestamp, None);
    }

    #[test]
    fn column_order_rejects_missing_columns() {
        assert!("user,item".parse::<ColumnOrder>().is_err());
        assert!("user,user,item,rating".parse::<ColumnOrder>().is_err());
        let o: ColumnOrder = "_,user,item,rating".parse().unwrap();
        assert_eq!((o.user, o.item, o.rating, o.timestamp), (1, 2, 3, None));
    }

    #[test]
    fn canonical_round_trip_with_blank_timestamp() {
        let ds = InteractionDataset::from_rows(
            RatingScale::new(0.5, 5.0, None),
            [("u,1", "i\"x", 3.5, None), ("u2", "i", 11.0 / 3.0, Some(7))],
        )
        .unwrap();
        let mut buf = Vec::new();
        ds.write_canonical(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("user_id,item_id,rating,timestamp\n"));
        assert!(text.ends_with('\n'));
        let back = parse_str(&text, Format::Canonical, &ParseOptions::default()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn singleton_stats() {
        let ds = InteractionDataset::from_rows(RatingScale::new(1.0, 5.0, None), [("u", "i", 5.0, None)]).unwrap();
        let s = dataset_stats(&ds).unwrap();
        assert_eq!(
            (s.n_users, s.n_items, s.n_interactions, s.avg_int_per_user, s.avg_int_per_item),
            (1, 1, 1, 1, 1)
        );
    }

    #[test]
    fn averages_truncate() {
        // 7 interactions over 2 users / 3 items -> 3.5 and 2.33
        let rows = [
            ("a", "x", 1.0),
            ("a", "y", 1.0),
            ("a", "z", 1.0),
            ("a", "x", 1.0),
            ("b", "x", 1.0),
            ("b", "y", 1.0),
            ("b", "z", 1.0),
        ];
        let ds = InteractionDataset::from_rows(
            RatingScale::new(1.0, 5.0, None),
            rows.iter().map(|&(u, i, r)| (u, i, r, None)),
        )
        .unwrap();
        let s = dataset_stats(&ds).unwrap();
        assert_eq!((s.avg_int_per_user, s.avg_int_per_item), (3, 2));
    }
}
