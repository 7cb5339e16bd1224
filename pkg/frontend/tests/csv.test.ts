import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { SchemaError, jumpRowIndices, parseTrajectory } from "../src/csv.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = readFileSync(join(here, "fixtures", "bouncing_ball.csv"), "utf8");

describe("parseTrajectory", () => {
  it("parses the bouncing-ball fixture", () => {
    const traj = parseTrajectory(fixture);
    expect(traj.stateDim).toBe(2);
    expect(traj.inputDim).toBe(1);
    expect(traj.rows.length).toBe(fixture.trimEnd().split("\n").length - 1);
    expect(traj.rows[0]).toEqual({
      edgeId: 0,
      t: 0,
      j: 0,
      state: [1, 0],
      input: [0],
    });
  });

  it("accepts a header without input columns", () => {
    const traj = parseTrajectory("edge_id,t,j,x0\n0,0.0,0,1.5\n");
    expect(traj.inputDim).toBe(0);
    expect(traj.rows[0].state).toEqual([1.5]);
  });

  it("rejects an empty file", () => {
    expect(() => parseTrajectory("")).toThrow(SchemaError);
  });

  it("rejects a header-only file", () => {
    expect(() => parseTrajectory("edge_id,t,j,x0,x1,u0\n")).toThrow(SchemaError);
  });

  it("rejects a malformed header", () => {
    expect(() => parseTrajectory("a,b,c\n1,2,3\n")).toThrow(SchemaError);
    expect(() => parseTrajectory("edge_id,t,j,u0\n0,0,0,1\n")).toThrow(SchemaError);
    expect(() => parseTrajectory("edge_id,t,j,x0,x2\n0,0,0,1,2\n")).toThrow(SchemaError);
  });

  it("rejects a wrong column count", () => {
    expect(() => parseTrajectory("edge_id,t,j,x0,x1\n0,0.0,0,1.0\n")).toThrow(
      SchemaError
    );
  });

  it("rejects non-numeric fields", () => {
    expect(() => parseTrajectory("edge_id,t,j,x0\n0,0.0,0,oops\n")).toThrow(SchemaError);
    expect(() => parseTrajectory("edge_id,t,j,x0\n0,0.0,0,\n")).toThrow(SchemaError);
  });

  it("rejects fractional j", () => {
    expect(() => parseTrajectory("edge_id,t,j,x0\n0,0.0,0.5,1.0\n")).toThrow(
      SchemaError
    );
  });
});

describe("jumpRowIndices", () => {
  it("finds exactly the j-increment rows", () => {
    const traj = parseTrajectory(
      [
        "edge_id,t,j,x0",
        "0,0.0,0,1.0",
        "0,0.1,0,0.9",
        "0,0.1,1,0.5", // jump
        "1,0.2,1,0.4",
        "1,0.2,2,0.2", // jump
      ].join("\n") + "\n"
    );
    expect(jumpRowIndices(traj)).toEqual([2, 4]);
  });

  it("matches the fixture's raw j-increment count", () => {
    const traj = parseTrajectory(fixture);
    let expected = 0;
    for (let i = 1; i < traj.rows.length; i++) {
      if (traj.rows[i].j > traj.rows[i - 1].j) expected += 1;
    }
    expect(jumpRowIndices(traj).length).toBe(expected);
    expect(expected).toBeGreaterThan(0);
  });
});
