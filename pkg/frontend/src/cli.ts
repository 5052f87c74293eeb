/**
 * Command line driver for the figure scripts.
 *
 * Subcommands::
 *
 *     locus    plot one locus from a trace CSV
 *     overlay  plot several traces on shared axes
 *     regen    regenerate the standard figure set from shipped traces
 *
 * Exit codes: 0 success, 1 usage error, 2 input error (missing file,
 * unknown column, malformed CSV).
 */

import { join } from "node:path";
import { parseArgs } from "node:util";

import { PlotSpec } from "./figure";
import { overlay, plotLocus, regenerateAll } from "./plots";

export const EXIT_OK = 0;
export const EXIT_USAGE = 1;
export const EXIT_INPUT = 2;

const USAGE = `usage: figures <command> [options]

commands:
  locus    --csv FILE --x COL --y COL --out IMG
           [--stride N] [--xlabel TEXT] [--ylabel TEXT]
           [--label TEXT] [--color #rrggbb]
  overlay  --csv FILE --csv FILE ... --x COL --y COL --out IMG
           [--stride N] [--xlabel TEXT] [--ylabel TEXT]
           [--label TEXT ...] [--color #rrggbb ...]
  regen    [--data DIR] [--out DIR]

The image format is chosen by the --out extension (.svg or .png).
`;

const OPTIONS = {
  csv: { type: "string", multiple: true },
  x: { type: "string" },
  y: { type: "string" },
  out: { type: "string" },
  stride: { type: "string" },
  xlabel: { type: "string" },
  ylabel: { type: "string" },
  label: { type: "string", multiple: true },
  color: { type: "string", multiple: true },
  data: { type: "string" },
} as const;

function usageError(message: string): number {
  process.stderr.write(`figures: error: ${message}\n`);
  process.stderr.write(USAGE);
  return EXIT_USAGE;
}

function parseStride(raw: string | undefined): number {
  if (raw === undefined) {
    return 1;
  }
  const stride = Number(raw);
  if (!Number.isInteger(stride) || stride < 1) {
    throw new UsageError(`--stride must be a positive integer, got '${raw}'`);
  }
  return stride;
}

class UsageError extends Error {}

interface CliValues {
  csv?: string[];
  x?: string;
  y?: string;
  out?: string;
  stride?: string;
  xlabel?: string;
  ylabel?: string;
  label?: string[];
  color?: string[];
  data?: string;
}

function buildSpecs(values: CliValues): PlotSpec[] {
  const paths = values.csv ?? [];
  if (paths.length === 0) {
    throw new UsageError("--csv is required");
  }
  if (!values.x || !values.y) {
    throw new UsageError("--x and --y column names are required");
  }
  if (!values.out) {
    throw new UsageError("--out image path is required");
  }
  const stride = parseStride(values.stride);
  return paths.map((csvPath, i) => ({
    csvPath,
    xColumn: values.x as string,
    yColumn: values.y as string,
    outPath: values.out as string,
    stride,
    xLabel: values.xlabel,
    yLabel: values.ylabel,
    label: values.label?.[i],
    color: values.color?.[i],
  }));
}

export function main(argv: string[]): number {
  let values: CliValues;
  let positionals: string[];
  try {
    const parsed = parseArgs({ args: argv, options: OPTIONS,
                               allowPositionals: true });
    values = parsed.values as CliValues;
    positionals = parsed.positionals;
  } catch (err) {
    return usageError((err as Error).message);
  }
  const command = positionals[0];
  if (command === undefined) {
    return usageError("a command is required");
  }
  if (positionals.length > 1) {
    return usageError(`unexpected argument '${positionals[1]}'`);
  }

  try {
    if (command === "locus") {
      const specs = buildSpecs(values);
      if (specs.length !== 1) {
        throw new UsageError("locus takes exactly one --csv; use overlay");
      }
      process.stdout.write(`wrote ${plotLocus(specs[0])}\n`);
      return EXIT_OK;
    }
    if (command === "overlay") {
      const specs = buildSpecs(values);
      process.stdout.write(`wrote ${overlay(specs)}\n`);
      return EXIT_OK;
    }
    if (command === "regen") {
      const dataDir = values.data ?? join(__dirname, "..", "data");
      const outDir = values.out ?? join(__dirname, "..", "figures");
      for (const path of regenerateAll(dataDir, outDir)) {
        process.stdout.write(`wrote ${path}\n`);
      }
      return EXIT_OK;
    }
    return usageError(`unknown command '${command}'`);
  } catch (err) {
    if (err instanceof UsageError) {
      return usageError(err.message);
    }
    process.stderr.write(`figures: error: ${(err as Error).message}\n`);
    return EXIT_INPUT;
  }
}
