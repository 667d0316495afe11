//! The datagen command: write a synthetic stream to CSV and echo how many
//! instances landed in each region.

use histream::data::{generate_synthetic, write_xy_csv, DataError, SyntheticConfig};

use crate::args::DatagenArgs;
use crate::error::CliError;

pub fn execute(args: &DatagenArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let mut config = SyntheticConfig::new(args.n, args.seed);
    config.rare_fraction = args.rare_frac;
    let dataset = generate_synthetic(&config).map_err(|err| match err {
        DataError::InvalidConfig(_) | DataError::EmptyDataset => CliError::usage(err),
        other => CliError::data(other),
    })?;
    write_xy_csv(&args.out, &dataset).map_err(CliError::data)?;

    let tallies = config.layout.tally(&dataset.instances);
    for (region, count) in config.layout.regions().iter().zip(&tallies) {
        println!("region {:<10} {:>10} instances", region.label, count);
    }
    println!("wrote {} instances to {}", dataset.len(), args.out.display());
    Ok(())
}
