// View state shared across the three views. Selections always refer to
// things that were fetched from the API, never invented client-side.

export interface ModuleSelection {
  name: string;
  revision: string | null;
}

export const MIN_DEPTH = 1;
export const MAX_DEPTH = 5;

export class ViewState {
  selectedPlatform: string | null = null;
  moduleSearchPattern = "";
  selectedModule: ModuleSelection | null = null;
  private depth = 1;

  get dependencyDepth(): number {
    return this.depth;
  }

  set dependencyDepth(value: number) {
    if (!Number.isInteger(value) || value < MIN_DEPTH || value > MAX_DEPTH) {
      throw new RangeError(`dependency depth must be between ${MIN_DEPTH} and ${MAX_DEPTH}`);
    }
    this.depth = value;
  }

  selectPlatform(name: string | null): void {
    this.selectedPlatform = name;
    this.selectedModule = null;
  }
}
