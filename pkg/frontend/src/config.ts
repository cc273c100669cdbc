export interface AppConfig {
  /** Base URL of the cleanroutes HTTP API. */
  apiBaseUrl: string;
  /** Optional background image template for the map ("" or null keeps the
   *  offline street-network base layer only). */
  tileSource: string | null;
  locale: string;
}

export const DEFAULT_CONFIG: AppConfig = {
  apiBaseUrl: "http://127.0.0.1:8000",
  tileSource: null,
  locale: "en",
};

export async function loadConfig(url = "./config.json"): Promise<AppConfig> {
  try {
    const resp = await fetch(url);
    if (!resp.ok) return { ...DEFAULT_CONFIG };
    const raw = (await resp.json()) as Partial<AppConfig>;
    return { ...DEFAULT_CONFIG, ...raw };
  } catch {
    return { ...DEFAULT_CONFIG };
  }
}
