//! `crystals list`: inventory of the loaded data set.

use clap::Args;

use super::{emit, LoadedData, TableDoc};

#[derive(Args)]
pub struct ListArgs {
    #[command(flatten)]
    pub out: crate::CommonOut,
}

pub fn run(data: &LoadedData, args: &ListArgs) -> anyhow::Result<()> {
    let mut doc = TableDoc {
        columns: vec![
            "crystal",
            "formula",
            "class",
            "point_group",
            "transparency_nm",
            "d_coefficients_pmv",
        ],
        rows: Vec::new(),
    };
    for crystal in data.set.iter() {
        let d: Vec<String> = crystal
            .d_coefficients
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        doc.rows.push(vec![
            crystal.name.clone(),
            crystal.formula.clone().unwrap_or_default(),
            format!("{:?}", crystal.axis_class).to_lowercase(),
            crystal.point_group.clone(),
            format!("{:.0}-{:.0}", crystal.transparency_nm.0, crystal.transparency_nm.1),
            d.join(" "),
        ]);
    }
    let mut text = doc.render(args.out.format);
    text.push_str(&format!(
        "\n{} crystals from {} (sha256 {})\n",
        data.set.len(),
        data.source,
        &data.checksum[..16]
    ));
    emit(&text, args.out.out.as_deref())
}
