/** Command line: train a screening model from a label CSV and a graph
 * directory, print per-epoch loss and final metrics as CSV lines, and
 * write the model in the solver's interchange format. */

import * as fs from "node:fs";

import { loadDataset } from "./dataset";
import { evaluate, formatMetrics } from "./metrics";
import { ARCHITECTURES, Architecture, exportModel } from "./model";
import { defaultConfig, train } from "./train";

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`expected --flag value pairs, got: ${argv[i]}`);
    }
    args.set(key.slice(2), value);
  }
  return args;
}

export function main(argv: string[]): number {
  if (argv[0] !== "train") {
    process.stderr.write("usage: trainer train --labels F --graphs DIR --arch A --out F\n");
    return 1;
  }
  let args: Map<string, string>;
  try {
    args = parseArgs(argv.slice(1));
  } catch (e) {
    process.stderr.write(`usage error: ${(e as Error).message}\n`);
    return 1;
  }
  const labels = args.get("labels");
  const graphs = args.get("graphs");
  const arch = args.get("arch") as Architecture;
  const out = args.get("out");
  if (!labels || !graphs || !out || !ARCHITECTURES.includes(arch)) {
    process.stderr.write("usage error: --labels, --graphs, --arch, --out are required\n");
    return 1;
  }
  const cfg = defaultConfig(arch);
  if (args.has("epochs")) cfg.epochs = Number(args.get("epochs"));
  if (args.has("lr")) cfg.learningRate = Number(args.get("lr"));
  if (args.has("dropout")) cfg.dropout = Number(args.get("dropout"));
  if (args.has("seed")) cfg.seed = Number(args.get("seed"));

  let dataset;
  try {
    dataset = loadDataset(labels, graphs, cfg.seed);
  } catch (e) {
    process.stderr.write(`input error: ${(e as Error).message}\n`);
    return 2;
  }
  const result = train(dataset.train, cfg, (epoch, loss) => {
    process.stdout.write(`epoch,${epoch},${loss}\n`);
  });
  fs.writeFileSync(out, exportModel(result.model));
  const split = dataset.test.length > 0 ? dataset.test : dataset.train;
  process.stdout.write(formatMetrics(evaluate(result.model, split)) + "\n");
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
