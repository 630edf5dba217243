use super::MassReport;
use crate::error::{Error, Result};
use crate::flow::format_full;

impl MassReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// One row per radius; the limit columns repeat on every row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["metric", "p", "radius", "quasilocal", "extrapolated", "err", "verdict"]).map_err(io)?;
        let p = self.p.map(format_full).unwrap_or_else(|| "huisken".into());
        let extrapolated = format_full(self.extrapolated);
        let err = format_full(self.err);
        let verdict = self.verdict.to_string();
        for (r, m) in self.radii.iter().zip(&self.quasilocal) {
            w.write_record([
                self.metric.as_str(),
                &p,
                &format_full(*r),
                &format_full(*m),
                &extrapolated,
                &err,
                &verdict,
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}
