// Shapes mirror the service responses verbatim; the client renders them
// as-is and never derives game rules from them.

export interface Portrait {
  url: string;
  caption: string;
  confidence: number;
  flagged: boolean;
}

export interface NpcView {
  entity: string;
  label: string;
  portrait: Portrait | null;
  line_count: number;
}

export interface CollectibleView {
  id: string;
  kind: "item" | "evidence";
  label: string;
}

export interface GeoPoint {
  lat: number;
  lon: number;
}

export interface MapFeatureView {
  kind: string;
  points: GeoPoint[];
}

export interface MapExtractView {
  place: string;
  bounding_box: { min_lat: number; min_lon: number; max_lat: number; max_lon: number };
  features: MapFeatureView[];
}

export interface LocationCard {
  entity: string;
  label: string;
  unlocked: boolean;
  visited: boolean;
  current: boolean;
  map: MapExtractView | null;
}

export interface TrayItem {
  id: string;
  text: string;
}

export interface SessionView {
  spec_ref: string;
  mode: string;
  status: "in-progress" | "won" | "lost";
  victim: { entity: string; label: string };
  location: {
    entity: string;
    label: string;
    npcs: NpcView[];
    collectibles: CollectibleView[];
  };
  locations: LocationCard[];
  suspects: { entity: string; label: string }[];
  tray: TrayItem[];
  evidence: { required: string[]; collected: string[] };
  state: unknown;
}

export interface SessionResponse {
  session_id: string;
  view: SessionView;
}

export interface ActionResponse {
  observation: string;
  verdict: "won" | "lost" | "rejected" | null;
  status: string;
  view: SessionView;
}

export interface GameSummary {
  game_id: string;
  mode: string;
  victim: string;
  seed: number;
  k: number;
  score: { transformation: number; functionality: number };
}

export interface ApiErrorBody {
  code: string;
  stage: string | null;
  message: string;
}
