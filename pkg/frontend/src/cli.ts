#!/usr/bin/env node
/**
 * render_figures <csv> --x snr_db|fraction --out <png|svg>
 *
 * Exit status: 0 on success, 2 on schema or input errors.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { SchemaError, X_FIELDS, type XField } from "./schema.js";
import { render } from "./render.js";

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .scriptName("render_figures")
    .command("$0 <csv>", "render a sweep CSV as a log-scale NMSE line chart")
    .positional("csv", { type: "string", demandOption: true })
    .option("x", {
      choices: X_FIELDS,
      demandOption: true,
      describe: "x-axis field",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output image path (.svg or .png)",
    })
    .option("title", { type: "string", describe: "chart title" })
    .option("export-points", {
      type: "string",
      describe: "also write the plotted values back out as CSV",
    })
    .strict()
    .parse();

  try {
    const result = await render({
      csvPath: argv.csv as string,
      xField: argv.x as XField,
      outPath: argv.out,
      title: argv.title,
      exportPointsPath: argv.exportPoints,
    });
    const points = result.series.reduce((acc, s) => acc + s.points.length, 0);
    console.log(
      `wrote ${result.outPath}: ${result.series.length} series, ${points} points`,
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(String(err instanceof Error ? err.message : err));
    }
    return 2;
  }
}

main().then((code) => {
  process.exitCode = code;
});
