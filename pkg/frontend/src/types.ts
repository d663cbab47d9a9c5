// Payload shapes of the assistant service API.

export interface DocumentRecord {
  id: string;
  dialect?: string;
  label?: string | null;
  title?: string | null;
  sources: { name: string; text: string }[];
  tags?: string[];
  components?: string[];
  description?: string | null;
}

export interface ProjectState {
  project_id: string;
  revision: number;
  attributes: Record<string, string>;
  hardware: { level: string; present: number[]; categories: string[] };
  documents: DocumentRecord[];
}

export type RecommendationKind = "classification" | "similar_code" | "hardware";
export type RecommendationStatus = "proposed" | "accepted" | "rejected";

export interface Recommendation {
  id: string;
  kind: RecommendationKind;
  payload: Record<string, unknown>;
  status: RecommendationStatus;
  revision_created: number;
}

export interface Question {
  id: string;
  attribute_key: string;
  text: string;
  status: "pending" | "answered";
}

export type Triple = [string, string, string];

export interface Neighbor {
  id: string;
  score: number;
}
