/** Trajectory CSV parsing with fail-fast schema checks.
 *
 * Expected header: edge_id,t,j,x0,...,x{n-1}[,u0,...,u{m-1}] with n >= 1.
 * Jump rows repeat t with j incremented by one.
 */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface TrajectoryRow {
  edgeId: number;
  t: number;
  j: number;
  state: number[];
  input: number[];
}

export interface Trajectory {
  stateDim: number;
  inputDim: number;
  rows: TrajectoryRow[];
}

function parseHeader(header: string): { stateDim: number; inputDim: number } {
  const cols = header.split(",");
  if (cols[0] !== "edge_id" || cols[1] !== "t" || cols[2] !== "j") {
    throw new SchemaError(`bad header: expected edge_id,t,j,... got "${header}"`);
  }
  let k = 3;
  let stateDim = 0;
  while (k < cols.length && cols[k] === `x${stateDim}`) {
    stateDim += 1;
    k += 1;
  }
  if (stateDim === 0) {
    throw new SchemaError("header declares no state columns");
  }
  let inputDim = 0;
  while (k < cols.length && cols[k] === `u${inputDim}`) {
    inputDim += 1;
    k += 1;
  }
  if (k !== cols.length) {
    throw new SchemaError(`unexpected header column "${cols[k]}"`);
  }
  return { stateDim, inputDim };
}

function parseNumber(field: string, line: number, col: number): number {
  if (field.trim() === "") {
    throw new SchemaError(`line ${line}: empty field in column ${col}`);
  }
  const v = Number(field);
  if (Number.isNaN(v)) {
    throw new SchemaError(`line ${line}: non-numeric field "${field}"`);
  }
  return v;
}

export function parseTrajectory(text: string): Trajectory {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty trajectory file");
  }
  const { stateDim, inputDim } = parseHeader(lines[0]);
  if (lines.length === 1) {
    throw new SchemaError("trajectory has a header but no samples");
  }
  const width = 3 + stateDim + inputDim;
  const rows: TrajectoryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== width) {
      throw new SchemaError(
        `line ${i + 1}: expected ${width} columns, got ${fields.length}`
      );
    }
    const nums = fields.map((f, c) => parseNumber(f, i + 1, c));
    const j = nums[2];
    if (!Number.isInteger(nums[0]) || !Number.isInteger(j)) {
      throw new SchemaError(`line ${i + 1}: edge_id and j must be integers`);
    }
    rows.push({
      edgeId: nums[0],
      t: nums[1],
      j,
      state: nums.slice(3, 3 + stateDim),
      input: nums.slice(3 + stateDim),
    });
  }
  return { stateDim, inputDim, rows };
}

/** Indices of rows whose j is one above the previous row's. */
export function jumpRowIndices(traj: Trajectory): number[] {
  const out: number[] = [];
  for (let i = 1; i < traj.rows.length; i++) {
    if (traj.rows[i].j === traj.rows[i - 1].j + 1) {
      out.push(i);
    }
  }
  return out;
}
