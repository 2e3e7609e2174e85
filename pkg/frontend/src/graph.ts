/** Weighted graph files and per-vertex label CSVs (shared formats with
 * the solver package). */

export interface Graph {
  n: number;
  weights: number[];
  adjacency: number[][];
}

export interface LabelRecord {
  graph: string;
  vertex: number; // 1-indexed, as in the CSV
  rule: string;
  label: number; // 0 not reducible, 1 reducible, 2 oracle timeout
}

/** Parse the weighted adjacency format: header "n m 10", then one line
 * per vertex with its weight followed by 1-indexed neighbor ids. */
export function parseGraph(text: string): Graph {
  const lines = text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("%"));
  if (lines.length === 0) {
    throw new Error("empty graph file");
  }
  const header = lines[0].split(/\s+/).map(Number);
  if (header.length < 2 || header.some((x) => !Number.isInteger(x))) {
    throw new Error(`malformed graph header: ${lines[0]}`);
  }
  const [n, m] = header;
  if (lines.length !== n + 1) {
    throw new Error(`expected ${n} vertex lines, got ${lines.length - 1}`);
  }
  const weights: number[] = [];
  const adjacency: number[][] = [];
  for (let v = 0; v < n; v++) {
    const fields = lines[v + 1].split(/\s+/).map(Number);
    if (fields.some((x) => !Number.isInteger(x))) {
      throw new Error(`non-integer field at vertex ${v + 1}`);
    }
    weights.push(fields[0]);
    adjacency.push(fields.slice(1).map((u) => u - 1));
  }
  let edges = 0;
  for (const nbrs of adjacency) {
    for (const u of nbrs) {
      if (u < 0 || u >= n) {
        throw new Error(`neighbor id out of range: ${u + 1}`);
      }
      edges += 1;
    }
  }
  if (edges !== 2 * m) {
    throw new Error(`header claims ${m} edges, found ${edges / 2}`);
  }
  return { n, weights, adjacency };
}

export function writeGraph(g: Graph): string {
  let m = 0;
  for (const nbrs of g.adjacency) m += nbrs.length;
  const lines = [`${g.n} ${m / 2} 10`];
  for (let v = 0; v < g.n; v++) {
    const fields = [g.weights[v], ...g.adjacency[v].map((u) => u + 1)];
    lines.push(fields.join(" "));
  }
  return lines.join("\n") + "\n";
}

export function degree(g: Graph, v: number): number {
  return g.adjacency[v].length;
}

export function parseLabels(text: string): LabelRecord[] {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines[0]?.trim() !== "graph,vertex,rule,label") {
    throw new Error(`unexpected label header: ${lines[0]}`);
  }
  const records: LabelRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].trim().split(",");
    if (parts.length !== 4) {
      throw new Error(`line ${i + 1}: expected 4 fields`);
    }
    const vertex = Number(parts[1]);
    const label = Number(parts[3]);
    if (!Number.isInteger(vertex) || ![0, 1, 2].includes(label)) {
      throw new Error(`line ${i + 1}: bad vertex or label`);
    }
    records.push({ graph: parts[0], vertex, rule: parts[2], label });
  }
  return records;
}
