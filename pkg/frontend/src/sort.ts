/**
 * Client-side reordering of server rows. No value is recomputed here:
 * toggling a direction reverses the rows (an involution), switching a
 * sort key re-sorts by values the server already provided.
 */

export type SortDirection = "asc" | "desc";

export function toggleDirection(direction: SortDirection): SortDirection {
  return direction === "asc" ? "desc" : "asc";
}

/** Direction toggle as a row operation: a reversed copy. */
export function reversed<T>(rows: T[]): T[] {
  return [...rows].reverse();
}

/** Stable re-sort by a numeric column already present in the rows. */
export function sortByValue<T>(rows: T[], value: (row: T) => number,
                               direction: SortDirection): T[] {
  const tagged = rows.map((row, index) => ({ row, index }));
  tagged.sort((a, b) => {
    const diff = value(a.row) - value(b.row);
    if (diff !== 0) return direction === "asc" ? diff : -diff;
    return a.index - b.index;
  });
  return tagged.map((t) => t.row);
}
