import type { Category } from "./types.js";

/** The one category -> color token table. Every route drawn anywhere in the
 *  UI goes through this mapping, so a rendered color can never disagree with
 *  the category the API reported. */
export const CATEGORY_COLORS: Readonly<Record<Category, string>> = {
  low: "green",
  moderate: "yellow",
  high: "red",
};

/** Stroke values for the color tokens (kept in sync with styles.css). */
export const TOKEN_STROKES: Readonly<Record<string, string>> = {
  green: "#2e8b57",
  yellow: "#d4a017",
  red: "#c0392b",
};

export function categoryColor(category: Category): string {
  const token = CATEGORY_COLORS[category];
  if (!token) throw new Error(`unknown exposure category: ${category}`);
  return token;
}
