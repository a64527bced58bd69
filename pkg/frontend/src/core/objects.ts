// Object kinds and the per-scope registry, mirroring the engine.

export interface ObjectKind {
  name: string;
  scope: string;
  char: string;
  color: string;
  canPickup: boolean;
  canToggle: boolean;
  canOverlap: boolean;
  blocksMovement: boolean;
  stateInit: number[];
  // State-dependent blocking override (e.g. an opened door).
  blocksWhen?: (state: number[]) => boolean;
}

export function makeKind(partial: Partial<ObjectKind> &
  Pick<ObjectKind, "name" | "scope" | "char">): ObjectKind {
  return {
    color: "grey",
    canPickup: false,
    canToggle: false,
    canOverlap: false,
    blocksMovement: false,
    stateInit: [],
    ...partial,
  };
}

export function kindBlocks(kind: ObjectKind, state: number[]): boolean {
  if (!kind.blocksMovement) return false;
  if (kind.blocksWhen) return kind.blocksWhen(state);
  return true;
}

export interface ObjectInstance {
  kind: ObjectKind;
  state: number[];
}

export function makeInstance(kind: ObjectKind, state?: number[]): ObjectInstance {
  return { kind, state: state ? [...state] : [...kind.stateInit] };
}

export class Registry {
  private byNameMap = new Map<string, ObjectKind>();
  private byCharMap = new Map<string, ObjectKind>();

  register(kind: ObjectKind): ObjectKind {
    const nameKey = `${kind.scope}/${kind.name}`;
    const charKey = `${kind.scope}/${kind.char}`;
    if (this.byNameMap.has(nameKey)) throw new Error(`duplicate kind ${nameKey}`);
    if (this.byCharMap.has(charKey)) throw new Error(`duplicate char ${charKey}`);
    this.byNameMap.set(nameKey, kind);
    this.byCharMap.set(charKey, kind);
    return kind;
  }

  byName(scope: string, name: string): ObjectKind {
    const kind = this.byNameMap.get(`${scope}/${name}`);
    if (!kind) throw new Error(`no kind ${scope}/${name}`);
    return kind;
  }

  byChar(scope: string, char: string): ObjectKind {
    const kind = this.byCharMap.get(`${scope}/${char}`);
    if (!kind) throw new Error(`no kind with char ${JSON.stringify(char)} in ${scope}`);
    return kind;
  }

  hasChar(scope: string, char: string): boolean {
    return this.byCharMap.has(`${scope}/${char}`);
  }
}

export const defaultRegistry = new Registry();
