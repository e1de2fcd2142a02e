/** Tile-grid placement of the 50 states plus DC (rough geography, unique cells). */

export interface Tile {
  col: number;
  row: number;
}

export const STATE_TILES: Record<string, Tile> = {
  AK: { col: 0, row: 0 }, ME: { col: 11, row: 0 },
  VT: { col: 10, row: 1 }, NH: { col: 11, row: 1 },
  WA: { col: 1, row: 2 }, ID: { col: 2, row: 2 }, MT: { col: 3, row: 2 },
  ND: { col: 4, row: 2 }, MN: { col: 5, row: 2 }, WI: { col: 6, row: 2 },
  MI: { col: 7, row: 2 }, NY: { col: 9, row: 2 }, MA: { col: 10, row: 2 },
  RI: { col: 11, row: 2 },
  OR: { col: 1, row: 3 }, NV: { col: 2, row: 3 }, WY: { col: 3, row: 3 },
  SD: { col: 4, row: 3 }, IA: { col: 5, row: 3 }, IL: { col: 6, row: 3 },
  IN: { col: 7, row: 3 }, OH: { col: 8, row: 3 }, PA: { col: 9, row: 3 },
  NJ: { col: 10, row: 3 }, CT: { col: 11, row: 3 },
  CA: { col: 1, row: 4 }, UT: { col: 2, row: 4 }, CO: { col: 3, row: 4 },
  NE: { col: 4, row: 4 }, MO: { col: 5, row: 4 }, KY: { col: 6, row: 4 },
  WV: { col: 7, row: 4 }, VA: { col: 8, row: 4 }, MD: { col: 9, row: 4 },
  DE: { col: 10, row: 4 },
  AZ: { col: 2, row: 5 }, NM: { col: 3, row: 5 }, KS: { col: 4, row: 5 },
  AR: { col: 5, row: 5 }, TN: { col: 6, row: 5 }, NC: { col: 7, row: 5 },
  SC: { col: 8, row: 5 }, DC: { col: 9, row: 5 },
  OK: { col: 3, row: 6 }, LA: { col: 4, row: 6 }, MS: { col: 5, row: 6 },
  AL: { col: 6, row: 6 }, GA: { col: 7, row: 6 },
  HI: { col: 0, row: 7 }, TX: { col: 3, row: 7 }, FL: { col: 8, row: 7 },
};

export const GRID_COLS = 12;
export const GRID_ROWS = 8;
